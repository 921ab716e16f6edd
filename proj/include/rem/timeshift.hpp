#ifndef REM_TIMESHIFT_HPP
#define REM_TIMESHIFT_HPP

#include <cstdint>
#include <vector>

#include "rem/rng.hpp"
#include "rem/types.hpp"

namespace rem {

// One non-negative shift per at-risk dyad, drawn independently of the event
// sequence. Exponential with mean nu * mean_event_time.
class ShiftAssignment {
public:
    ShiftAssignment() = default;
    ShiftAssignment(std::vector<Dyad> dyads, std::vector<double> shifts,
                    int node_count, double nu, double mean_event_time);

    double shift(const Dyad& d) const;
    bool covers(const Dyad& d) const;
    double max_shift() const { return max_shift_; }
    double nu() const { return nu_; }
    double mean_event_time() const { return mean_event_time_; }
    const std::vector<Dyad>& dyads() const { return dyads_; }
    int node_count() const { return node_count_; }

    // dyads ordered by shift value; shifted_risk_set uses the fact that
    // {h : t - T <= h <= t} is a contiguous range here
    const std::vector<int>& order_by_shift() const { return order_; }
    const std::vector<double>& sorted_shifts() const { return sorted_; }
    int rank_of(const Dyad& d) const;

private:
    std::vector<Dyad> dyads_;
    std::vector<double> shift_by_index_;  // dyad_index -> shift, NaN if excluded
    std::vector<int> order_;              // positions into dyads_, sorted by shift
    std::vector<double> sorted_;          // shifts in sorted order
    std::vector<int> rank_by_index_;      // dyad_index -> rank in sorted order
    int node_count_ = 0;
    double nu_ = 0.0;
    double mean_event_time_ = 0.0;
    double max_shift_ = 0.0;
};

ShiftAssignment draw_shifts(const std::vector<Dyad>& dyads, int node_count,
                            double nu, double mean_event_time, Rng& rng);

// M^e: every event moved to t + h of its dyad, re-sorted; per-dyad counts are
// preserved, ties after re-sorting go through the usual nudge rule.
EventSequence shift_process(const EventSequence& seq, const ShiftAssignment& shifts);

// dyads whose back-shifted time t - h lies in [0, horizon]; the base policy
// is already baked into the assignment's dyad set
std::vector<Dyad> shifted_risk_set(double t, const ShiftAssignment& shifts, double horizon);

struct CaseControlRow {
    Dyad event_dyad;
    double event_time = 0.0;    // t_k, back-shifted (original) event time
    Dyad control_dyad;
    double control_time = 0.0;  // t*_k = t_k + h_event - h_control
};

struct ShiftedCaseControlSet {
    std::vector<CaseControlRow> rows;
    int dropped_uninformative = 0;
    int total_events = 0;
};

// One control per shifted event, uniform over the shifted risk set minus the
// event dyad; events whose shifted risk set holds only themselves are dropped
// and counted. Back-shifted event times are snapped to the exact original
// event times (te - h reconstructs t only up to rounding, and a time one ulp
// past the event would corrupt strictly-before endogenous statistics).
ShiftedCaseControlSet sample_case_control(const EventSequence& shifted_seq,
                                          const ShiftAssignment& shifts,
                                          const EventSequence& original, Rng& rng);

// Configuration hook for a future conditional-logit fitter: the same sampling
// with several controls per event, emitted as grouped rows. The core fitter
// consumes single-control rows only.
struct GroupedCaseControlRow {
    Dyad event_dyad;
    double event_time = 0.0;
    std::vector<Dyad> control_dyads;
    std::vector<double> control_times;
};

std::vector<GroupedCaseControlRow> sample_case_control_multi(
    const EventSequence& shifted_seq, const ShiftAssignment& shifts,
    const EventSequence& original, int controls_per_event, Rng& rng);

}  // namespace rem

#endif
