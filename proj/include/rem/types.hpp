#ifndef REM_TYPES_HPP
#define REM_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rem {

// Ordered sender -> receiver pair. Node ids are dense integers 0..p-1;
// string station labels live only in the ingest layer.
struct Dyad {
    int sender = 0;
    int receiver = 0;

    bool operator==(const Dyad&) const = default;
    bool is_self_loop() const { return sender == receiver; }
};

enum class RiskPolicy {
    NoSelfLoops,   // all ordered pairs s != r
    AllPairs,      // all ordered pairs including self-loops
};

inline int dyad_index(const Dyad& d, int node_count) {
    return d.sender * node_count + d.receiver;
}

inline Dyad dyad_from_index(int idx, int node_count) {
    return Dyad{idx / node_count, idx % node_count};
}

// All ordered pairs admitted by the policy, in dyad_index order.
std::vector<Dyad> policy_dyads(RiskPolicy policy, int node_count);
int policy_dyad_count(RiskPolicy policy, int node_count);
bool policy_admits(RiskPolicy policy, const Dyad& d);

struct Event {
    double time = 0.0;
    Dyad dyad;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ordered realization of the marked point process. Times are strictly
// increasing and lie in (0, horizon]. Ties handed to the constructor are
// broken by nudging the later event up by the smallest representable
// increment, in sequence order, with a counter.
class EventSequence {
public:
    EventSequence() = default;
    EventSequence(std::vector<Event> events, double horizon, int node_count);

    // incremental construction for simulators; times must be strictly increasing
    static EventSequence empty(int node_count);
    void append(const Event& e);
    void set_horizon(double horizon) { horizon_ = horizon; }

    const std::vector<Event>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    double horizon() const { return horizon_; }
    int node_count() const { return node_count_; }
    int tie_adjustments() const { return tie_adjustments_; }

    // occurrence times of one dyad, sorted ascending (the history index)
    const std::vector<double>& dyad_times(const Dyad& d) const;

    // N_sr(t): events of the dyad with time <= t
    int count_at(const Dyad& d, double t) const;
    // events of the dyad with time strictly before t (predictable queries)
    int count_before(const Dyad& d, double t) const;
    // most recent occurrence time strictly before t, or -1 if none
    double last_before(const Dyad& d, double t) const;

    double mean_event_time() const;

private:
    std::vector<Event> events_;
    double horizon_ = 0.0;
    int node_count_ = 0;
    int tie_adjustments_ = 0;
    std::vector<std::vector<double>> dyad_times_;  // indexed by dyad_index
    static const std::vector<double> kEmpty;
};

int count_process(const EventSequence& seq, const Dyad& d, double t);

}  // namespace rem

#endif
