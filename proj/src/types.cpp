#include "rem/types.hpp"

#include <algorithm>
#include <cmath>

namespace rem {

const std::vector<double> EventSequence::kEmpty{};

std::vector<Dyad> policy_dyads(RiskPolicy policy, int node_count) {
    std::vector<Dyad> out;
    out.reserve(static_cast<std::size_t>(node_count) * node_count);
    for (int s = 0; s < node_count; ++s) {
        for (int r = 0; r < node_count; ++r) {
            const Dyad d{s, r};
            if (policy_admits(policy, d)) out.push_back(d);
        }
    }
    return out;
}

int policy_dyad_count(RiskPolicy policy, int node_count) {
    return policy == RiskPolicy::AllPairs ? node_count * node_count
                                          : node_count * (node_count - 1);
}

bool policy_admits(RiskPolicy policy, const Dyad& d) {
    return policy == RiskPolicy::AllPairs || !d.is_self_loop();
}

EventSequence::EventSequence(std::vector<Event> events, double horizon, int node_count)
    : events_(std::move(events)), horizon_(horizon), node_count_(node_count) {
    if (node_count_ <= 0) throw ConfigError("EventSequence: node_count must be positive");
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
    for (std::size_t k = 0; k < events_.size(); ++k) {
        Event& e = events_[k];
        if (!(e.time > 0.0)) throw ConfigError("EventSequence: event times must be > 0");
        if (e.dyad.sender < 0 || e.dyad.sender >= node_count_ ||
            e.dyad.receiver < 0 || e.dyad.receiver >= node_count_) {
            throw ConfigError("EventSequence: node id outside 0..p-1");
        }
        if (k > 0 && e.time <= events_[k - 1].time) {
            e.time = std::nextafter(events_[k - 1].time,
                                    std::numeric_limits<double>::infinity());
            ++tie_adjustments_;
        }
    }
    if (!events_.empty() && events_.back().time > horizon_) {
        horizon_ = events_.back().time;
    }
    dyad_times_.assign(static_cast<std::size_t>(node_count_) * node_count_, {});
    for (const Event& e : events_) {
        dyad_times_[dyad_index(e.dyad, node_count_)].push_back(e.time);
    }
}

EventSequence EventSequence::empty(int node_count) {
    EventSequence seq;
    if (node_count <= 0) throw ConfigError("EventSequence: node_count must be positive");
    seq.node_count_ = node_count;
    seq.dyad_times_.assign(static_cast<std::size_t>(node_count) * node_count, {});
    return seq;
}

void EventSequence::append(const Event& e) {
    if (!(e.time > 0.0) || (!events_.empty() && e.time <= events_.back().time)) {
        throw ConfigError("EventSequence::append: times must be strictly increasing and > 0");
    }
    events_.push_back(e);
    dyad_times_[dyad_index(e.dyad, node_count_)].push_back(e.time);
    if (e.time > horizon_) horizon_ = e.time;
}

const std::vector<double>& EventSequence::dyad_times(const Dyad& d) const {
    if (dyad_times_.empty()) return kEmpty;
    return dyad_times_[dyad_index(d, node_count_)];
}

int EventSequence::count_at(const Dyad& d, double t) const {
    const auto& ts = dyad_times(d);
    return static_cast<int>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
}

int EventSequence::count_before(const Dyad& d, double t) const {
    const auto& ts = dyad_times(d);
    return static_cast<int>(std::lower_bound(ts.begin(), ts.end(), t) - ts.begin());
}

double EventSequence::last_before(const Dyad& d, double t) const {
    const auto& ts = dyad_times(d);
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    if (it == ts.begin()) return -1.0;
    return *(it - 1);
}

double EventSequence::mean_event_time() const {
    if (events_.empty()) return 0.0;
    double s = 0.0;
    for (const Event& e : events_) s += e.time;
    return s / static_cast<double>(events_.size());
}

int count_process(const EventSequence& seq, const Dyad& d, double t) {
    return seq.count_at(d, t);
}

}  // namespace rem
