#ifndef REM_INGEST_HPP
#define REM_INGEST_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rem/covariates.hpp"
#include "rem/timeshift.hpp"
#include "rem/types.hpp"

namespace rem {

// "YYYY-MM-DD HH:MM[:SS[.frac]]" or plain epoch seconds -> epoch seconds.
// Wall-clock strings are interpreted in one configured zone; no DST handling.
double parse_timestamp(const std::string& text);

// inverse of parse_timestamp for whole-second epochs: "YYYY-MM-DD HH:MM:SS"
std::string format_timestamp(double epoch_seconds);

// fractional hours since local midnight of the wall-clock anchor of t=0
double derive_time_of_day(double t_seconds, double origin_hours);
// hours since midnight of an epoch timestamp
double hours_of_day(double epoch_seconds);

// dense station ids; string labels live only here
class StationIndex {
public:
    int add_or_get(const std::string& label);
    std::optional<int> find(const std::string& label) const;
    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::map<std::string, int> lookup_;
};

struct EventCsvOptions {
    std::string time_col = "started_at";
    std::string sender_col = "start_station_id";
    std::string receiver_col = "end_station_id";
    std::optional<std::string> window_start;  // timestamp text
    std::optional<std::string> window_end;
    double max_error_fraction = 0.01;
};

struct IngestReport {
    int rows_read = 0;
    int rows_kept = 0;
    int rows_dropped_window = 0;
    int tie_adjustments = 0;
    double origin_epoch = 0.0;  // epoch seconds mapped to t = 0
    double horizon = 0.0;       // window length T
    std::vector<std::string> row_errors;  // "line N: ..."
};

// Events CSV -> EventSequence. The time origin is the start of the study
// window (so t = 0 is event-free); rows outside the window are dropped and
// counted; ties resolved by the usual nudge rule.
EventSequence read_events(const std::string& path, const EventCsvOptions& options,
                          StationIndex& stations, IngestReport& report);

// timestamp,value CSV -> left-continuous step series on the study window.
// Stamps are shifted to seconds from origin_epoch; a gap between consecutive
// stamps beyond max_gap_seconds is an error naming the interval.
StepSeries read_global_series(const std::string& path, ValueTransform transform,
                              double origin_epoch, double max_gap_seconds);

// long-format distance CSV (station_from, station_to, minutes); unknown
// stations are added to the index; missing pairs stay NaN
Eigen::MatrixXd read_distance_matrix(const std::string& path, StationIndex& stations);

void write_events_csv(const EventSequence& seq, const std::string& path,
                      const std::vector<std::string>* labels = nullptr);

// events CSV in our own format (time,sender,receiver with full precision)
EventSequence read_events_csv(const std::string& path, int node_count, double horizon);

void write_case_control_csv(const ShiftedCaseControlSet& ccs, const std::string& path);

}  // namespace rem

#endif
