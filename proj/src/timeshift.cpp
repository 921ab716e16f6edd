#include "rem/timeshift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rem {

ShiftAssignment::ShiftAssignment(std::vector<Dyad> dyads, std::vector<double> shifts,
                                 int node_count, double nu, double mean_event_time)
    : dyads_(std::move(dyads)),
      node_count_(node_count),
      nu_(nu),
      mean_event_time_(mean_event_time) {
    if (dyads_.empty()) throw ConfigError("ShiftAssignment: empty dyad set");
    if (shifts.size() != dyads_.size()) {
        throw ConfigError("ShiftAssignment: shifts and dyads size mismatch");
    }
    const std::size_t cells = static_cast<std::size_t>(node_count_) * node_count_;
    shift_by_index_.assign(cells, std::numeric_limits<double>::quiet_NaN());
    rank_by_index_.assign(cells, -1);
    for (std::size_t i = 0; i < dyads_.size(); ++i) {
        if (!(shifts[i] >= 0.0)) throw ConfigError("ShiftAssignment: shifts must be >= 0");
        shift_by_index_[dyad_index(dyads_[i], node_count_)] = shifts[i];
    }
    order_.resize(dyads_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(),
              [&](int a, int b) { return shifts[a] < shifts[b]; });
    sorted_.resize(dyads_.size());
    for (std::size_t r = 0; r < order_.size(); ++r) {
        sorted_[r] = shifts[order_[r]];
        rank_by_index_[dyad_index(dyads_[order_[r]], node_count_)] = static_cast<int>(r);
    }
    max_shift_ = sorted_.back();
}

double ShiftAssignment::shift(const Dyad& d) const {
    const double h = shift_by_index_[dyad_index(d, node_count_)];
    if (std::isnan(h)) throw ConfigError("ShiftAssignment: dyad not covered");
    return h;
}

bool ShiftAssignment::covers(const Dyad& d) const {
    return !std::isnan(shift_by_index_[dyad_index(d, node_count_)]);
}

int ShiftAssignment::rank_of(const Dyad& d) const {
    return rank_by_index_[dyad_index(d, node_count_)];
}

ShiftAssignment draw_shifts(const std::vector<Dyad>& dyads, int node_count,
                            double nu, double mean_event_time, Rng& rng) {
    if (dyads.empty()) throw ConfigError("draw_shifts: empty dyad set");
    if (!(nu > 0.0)) throw ConfigError("draw_shifts: nu must be > 0");
    if (!(mean_event_time > 0.0)) throw ConfigError("draw_shifts: mean_event_time must be > 0");
    std::vector<double> shifts(dyads.size());
    const double mean = nu * mean_event_time;
    for (double& h : shifts) h = rng.exponential(mean);
    return ShiftAssignment(dyads, std::move(shifts), node_count, nu, mean_event_time);
}

EventSequence shift_process(const EventSequence& seq, const ShiftAssignment& shifts) {
    std::vector<Event> shifted;
    shifted.reserve(seq.size());
    for (const Event& e : seq.events()) {
        shifted.push_back(Event{e.time + shifts.shift(e.dyad), e.dyad});
    }
    return EventSequence(std::move(shifted), seq.horizon() + shifts.max_shift(),
                         seq.node_count());
}

std::vector<Dyad> shifted_risk_set(double t, const ShiftAssignment& shifts, double horizon) {
    const auto& sorted = shifts.sorted_shifts();
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), t - horizon);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), t);
    std::vector<Dyad> out;
    out.reserve(static_cast<std::size_t>(hi - lo));
    for (auto it = lo; it != hi; ++it) {
        const int pos = static_cast<int>(it - sorted.begin());
        out.push_back(shifts.dyads()[shifts.order_by_shift()[pos]]);
    }
    return out;
}

namespace {

double clamp_to(double x, double lo, double hi) {
    return std::min(hi, std::max(lo, x));
}

// te - h reconstructs the original event time only up to rounding; snap to
// the dyad's nearest recorded time so strictly-before history queries exclude
// exactly the event itself
double snap_to_event_time(const EventSequence& original, const Dyad& d, double t) {
    const std::vector<double>& times = original.dyad_times(d);
    if (times.empty()) return t;
    auto it = std::lower_bound(times.begin(), times.end(), t);
    double best = it != times.end() ? *it : times.back();
    if (it != times.begin()) {
        const double prev = *(it - 1);
        if (std::abs(prev - t) < std::abs(best - t)) best = prev;
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    return std::abs(best - t) <= tol ? best : t;
}

}  // namespace

ShiftedCaseControlSet sample_case_control(const EventSequence& shifted_seq,
                                          const ShiftAssignment& shifts,
                                          const EventSequence& original, Rng& rng) {
    const double horizon = original.horizon();
    ShiftedCaseControlSet out;
    out.total_events = static_cast<int>(shifted_seq.size());
    const auto& sorted = shifts.sorted_shifts();
    const auto& order = shifts.order_by_shift();
    for (const Event& e : shifted_seq.events()) {
        const double te = e.time;
        const double h_event = shifts.shift(e.dyad);
        const int lo = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), te - horizon) - sorted.begin());
        const int hi = static_cast<int>(
            std::upper_bound(sorted.begin(), sorted.end(), te) - sorted.begin());
        const int rank = shifts.rank_of(e.dyad);
        const bool event_in_window = rank >= lo && rank < hi;
        const int eligible = (hi - lo) - (event_in_window ? 1 : 0);
        if (eligible <= 0) {
            ++out.dropped_uninformative;
            continue;
        }
        int pos = lo + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(eligible)));
        if (event_in_window && pos >= rank) ++pos;
        const Dyad control = shifts.dyads()[order[pos]];
        const double h_control = sorted[pos];
        CaseControlRow row;
        row.event_dyad = e.dyad;
        row.event_time =
            snap_to_event_time(original, e.dyad, clamp_to(te - h_event, 0.0, horizon));
        row.control_dyad = control;
        row.control_time = clamp_to(te - h_control, 0.0, horizon);
        out.rows.push_back(row);
    }
    return out;
}

std::vector<GroupedCaseControlRow> sample_case_control_multi(
    const EventSequence& shifted_seq, const ShiftAssignment& shifts,
    const EventSequence& original, int controls_per_event, Rng& rng) {
    const double horizon = original.horizon();
    if (controls_per_event < 1) {
        throw ConfigError("sample_case_control_multi: need >= 1 control per event");
    }
    std::vector<GroupedCaseControlRow> out;
    const auto& sorted = shifts.sorted_shifts();
    const auto& order = shifts.order_by_shift();
    for (const Event& e : shifted_seq.events()) {
        const double te = e.time;
        const int lo = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), te - horizon) - sorted.begin());
        const int hi = static_cast<int>(
            std::upper_bound(sorted.begin(), sorted.end(), te) - sorted.begin());
        const int rank = shifts.rank_of(e.dyad);
        const bool event_in_window = rank >= lo && rank < hi;
        std::vector<int> positions;
        for (int p = lo; p < hi; ++p) {
            if (event_in_window && p == rank) continue;
            positions.push_back(p);
        }
        if (positions.empty()) continue;
        // partial Fisher-Yates for a without-replacement draw within the group
        const int k = std::min<int>(controls_per_event, static_cast<int>(positions.size()));
        GroupedCaseControlRow row;
        row.event_dyad = e.dyad;
        row.event_time = snap_to_event_time(
            original, e.dyad, clamp_to(te - shifts.shift(e.dyad), 0.0, horizon));
        for (int i = 0; i < k; ++i) {
            const int j = i + static_cast<int>(
                rng.uniform_int(static_cast<std::uint64_t>(positions.size() - i)));
            std::swap(positions[i], positions[j]);
            row.control_dyads.push_back(shifts.dyads()[order[positions[i]]]);
            row.control_times.push_back(clamp_to(te - sorted[positions[i]], 0.0, horizon));
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace rem
