#include "rem/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rem {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace and quotes
        auto b = field.find_first_not_of(" \t\r\"");
        auto e = field.find_last_not_of(" \t\r\"");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

// Howard Hinnant's days-from-civil
long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    throw ConfigError("CSV is missing column '" + name + "'");
}

}  // namespace

double parse_timestamp(const std::string& text) {
    int y, mo, d, h, mi;
    double s = 0.0;
    if (std::sscanf(text.c_str(), "%d-%d-%d %d:%d:%lf", &y, &mo, &d, &h, &mi, &s) >= 5 ||
        std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%lf", &y, &mo, &d, &h, &mi, &s) >= 5) {
        return static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 +
               mi * 60.0 + s;
    }
    char* end = nullptr;
    const double epoch = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || (end && *end != '\0')) {
        throw ConfigError("unparseable timestamp: '" + text + "'");
    }
    return epoch;
}

std::string format_timestamp(double epoch_seconds) {
    long long total = static_cast<long long>(std::floor(epoch_seconds));
    long long days = total / 86400;
    long long rem = total % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    // Hinnant's civil-from-days
    days += 719468;
    const long long era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long y = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u %02lld:%02lld:%02lld",
                  y + (m <= 2), m, d, rem / 3600, (rem / 60) % 60, rem % 60);
    return buf;
}

double hours_of_day(double epoch_seconds) {
    double h = std::fmod(epoch_seconds / 3600.0, 24.0);
    return h < 0.0 ? h + 24.0 : h;
}

double derive_time_of_day(double t_seconds, double origin_hours) {
    double h = std::fmod(origin_hours + t_seconds / 3600.0, 24.0);
    return h < 0.0 ? h + 24.0 : h;
}

int StationIndex::add_or_get(const std::string& label) {
    auto it = lookup_.find(label);
    if (it != lookup_.end()) return it->second;
    const int id = static_cast<int>(labels_.size());
    labels_.push_back(label);
    lookup_[label] = id;
    return id;
}

std::optional<int> StationIndex::find(const std::string& label) const {
    auto it = lookup_.find(label);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

EventSequence read_events(const std::string& path, const EventCsvOptions& options,
                          StationIndex& stations, IngestReport& report) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open events file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty events file: " + path);
    const auto header = split_csv_line(line);
    const int tc = find_column(header, options.time_col);
    const int sc = find_column(header, options.sender_col);
    const int rc = find_column(header, options.receiver_col);

    struct RawRow {
        double epoch;
        std::string sender, receiver;
    };
    std::vector<RawRow> raw;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++report.rows_read;
        const auto fields = split_csv_line(line);
        try {
            if (static_cast<int>(fields.size()) <= std::max({tc, sc, rc})) {
                throw ConfigError("too few fields");
            }
            if (fields[sc].empty() || fields[rc].empty()) {
                throw ConfigError("missing station");
            }
            raw.push_back(RawRow{parse_timestamp(fields[tc]), fields[sc], fields[rc]});
        } catch (const std::exception& e) {
            report.row_errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (report.rows_read > 0 &&
        static_cast<double>(report.row_errors.size()) >
            options.max_error_fraction * report.rows_read) {
        throw ConfigError("events file '" + path + "': " +
                          std::to_string(report.row_errors.size()) +
                          " bad rows exceed the allowed error fraction");
    }

    double window_start = 0.0, window_end = 0.0;
    if (options.window_start) {
        window_start = parse_timestamp(*options.window_start);
    } else {
        window_start = std::numeric_limits<double>::infinity();
        for (const RawRow& r : raw) window_start = std::min(window_start, r.epoch);
        window_start -= 1.0;  // keep t = 0 event-free
    }
    if (options.window_end) {
        window_end = parse_timestamp(*options.window_end);
    } else {
        window_end = -std::numeric_limits<double>::infinity();
        for (const RawRow& r : raw) window_end = std::max(window_end, r.epoch);
    }
    report.origin_epoch = window_start;
    report.horizon = window_end - window_start;

    std::vector<Event> events;
    for (const RawRow& r : raw) {
        if (r.epoch <= window_start || r.epoch > window_end) {
            ++report.rows_dropped_window;
            continue;
        }
        Event e;
        e.time = r.epoch - window_start;
        e.dyad.sender = stations.add_or_get(r.sender);
        e.dyad.receiver = stations.add_or_get(r.receiver);
        events.push_back(e);
    }
    report.rows_kept = static_cast<int>(events.size());
    EventSequence seq(std::move(events), report.horizon, std::max(1, stations.size()));
    report.tie_adjustments = seq.tie_adjustments();
    return seq;
}

StepSeries read_global_series(const std::string& path, ValueTransform transform,
                              double origin_epoch, double max_gap_seconds) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open series file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty series file: " + path);
    const auto header = split_csv_line(line);
    const int tc = find_column(header, "timestamp");
    const int vc = find_column(header, "value");
    std::vector<double> times, values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const double t = parse_timestamp(fields[tc]) - origin_epoch;
        const double v = std::stod(fields[vc]);
        if (!times.empty()) {
            const double gap = t - times.back();
            if (gap > max_gap_seconds) {
                throw ConfigError("series '" + path + "': gap of " + std::to_string(gap) +
                                  "s over [" +
                                  format_timestamp(times.back() + origin_epoch) + ", " +
                                  format_timestamp(t + origin_epoch) +
                                  ") exceeds the forward-fill limit");
            }
        }
        times.push_back(t);
        values.push_back(apply_transform(transform, v));
    }
    return StepSeries(std::move(times), std::move(values));
}

Eigen::MatrixXd read_distance_matrix(const std::string& path, StationIndex& stations) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open distance file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty distance file: " + path);
    struct Entry {
        int from, to;
        double minutes;
    };
    std::vector<Entry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 3) throw ConfigError("distance file: need 3 columns");
        entries.push_back(Entry{stations.add_or_get(fields[0]),
                                stations.add_or_get(fields[1]), std::stod(fields[2])});
    }
    const int p = stations.size();
    Eigen::MatrixXd m =
        Eigen::MatrixXd::Constant(p, p, std::numeric_limits<double>::quiet_NaN());
    for (const Entry& e : entries) m(e.from, e.to) = e.minutes;
    return m;
}

void write_events_csv(const EventSequence& seq, const std::string& path,
                      const std::vector<std::string>* labels) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write events file: " + path);
    out << "time,sender,receiver\n";
    char buf[64];
    for (const Event& e : seq.events()) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.time);
        out << buf << ',';
        if (labels) {
            out << (*labels)[e.dyad.sender] << ',' << (*labels)[e.dyad.receiver] << '\n';
        } else {
            out << e.dyad.sender << ',' << e.dyad.receiver << '\n';
        }
    }
}

EventSequence read_events_csv(const std::string& path, int node_count, double horizon) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open events file: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<Event> events;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 3) throw ConfigError("events file: need 3 columns");
        events.push_back(Event{std::stod(fields[0]),
                               Dyad{std::stoi(fields[1]), std::stoi(fields[2])}});
    }
    return EventSequence(std::move(events), horizon, node_count);
}

void write_case_control_csv(const ShiftedCaseControlSet& ccs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write case-control file: " + path);
    out << "event_time,event_sender,event_receiver,control_time,control_sender,"
           "control_receiver\n";
    char buf[64];
    for (const CaseControlRow& row : ccs.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", row.event_time);
        out << buf << ',' << row.event_dyad.sender << ',' << row.event_dyad.receiver << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", row.control_time);
        out << buf << ',' << row.control_dyad.sender << ',' << row.control_dyad.receiver
            << '\n';
    }
}

}  // namespace rem
