#include "rem/fixture.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rem/ingest.hpp"
#include "rem/pipeline.hpp"
#include "rem/rng.hpp"
#include "rem/simulator.hpp"

namespace rem {

namespace {

constexpr int kStations = 12;
constexpr const char* kWindowStart = "2023-07-01 00:00:00";

std::string station_label(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "ST%02d", i + 1);
    return buf;
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write fixture file: " + path);
    return out;
}

double bimodal_tod(double h) {
    const double a = (h - 8.5) / 1.5;
    const double b = (h - 17.75) / 1.5;
    return 0.9 * (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b));
}

}  // namespace

FixturePaths generate_bike_fixture(const std::string& dir, int rows, std::uint64_t seed) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create fixture directory: " + dir);

    FixturePaths paths;
    paths.rides = join(dir, "rides.csv");
    paths.temperature = join(dir, "temperature.csv");
    paths.precipitation = join(dir, "precipitation.csv");
    paths.distances = join(dir, "distances.csv");
    paths.planted_tod = join(dir, "planted_tod.csv");

    // station grid: random coordinates in a 6 km box, riding speed 15 km/h
    Rng coord_rng(seed, 13);
    std::vector<double> sx(kStations), sy(kStations);
    for (int i = 0; i < kStations; ++i) {
        sx[i] = coord_rng.uniform(0.0, 6.0);
        sy[i] = coord_rng.uniform(0.0, 6.0);
    }
    Eigen::MatrixXd minutes =
        Eigen::MatrixXd::Constant(kStations, kStations,
                                  std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < kStations; ++i) {
        for (int j = 0; j < kStations; ++j) {
            if (i == j) continue;
            const double km = std::hypot(sx[i] - sx[j], sy[i] - sy[j]);
            minutes(i, j) = std::max(0.5, km / 15.0 * 60.0);
        }
    }
    {
        auto out = open_out(paths.distances);
        out << "start_station_id,end_station_id,minutes\n";
        char buf[64];
        for (int i = 0; i < kStations; ++i) {
            for (int j = 0; j < kStations; ++j) {
                if (i == j) continue;
                std::snprintf(buf, sizeof(buf), "%.6f", minutes(i, j));
                out << station_label(i) << ',' << station_label(j) << ',' << buf << '\n';
            }
        }
    }

    // hourly weather over a generous margin around the study window
    const double start_epoch = parse_timestamp(kWindowStart);
    const double weather_span = 35.0 * 86400.0;
    Rng weather_rng(seed, 11);
    std::vector<double> wt, temp, precip;
    for (double t = -3600.0; t <= weather_span; t += 3600.0) {
        const double hod = std::fmod(t / 3600.0 + 24.0 * 1000.0, 24.0);
        const double day = t / 86400.0;
        wt.push_back(t);
        temp.push_back(24.0 + 5.0 * std::sin(2.0 * M_PI * (hod - 9.0) / 24.0) +
                       3.0 * std::sin(2.0 * M_PI * day / 5.3) +
                       weather_rng.normal(0.0, 0.8));
        precip.push_back(weather_rng.uniform() < 0.08
                             ? weather_rng.exponential(2.0)
                             : 0.0);
    }
    {
        auto out = open_out(paths.temperature);
        out << "timestamp,value\n";
        char buf[64];
        for (std::size_t i = 0; i < wt.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.4f", temp[i]);
            out << format_timestamp(start_epoch + wt[i]) << ',' << buf << '\n';
        }
    }
    {
        auto out = open_out(paths.precipitation);
        out << "timestamp,value\n";
        char buf[64];
        for (std::size_t i = 0; i < wt.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.4f", precip[i]);
            out << format_timestamp(start_epoch + wt[i]) << ',' << buf << '\n';
        }
    }

    // generating intensity: planted bimodal time-of-day signal (strong), a
    // mild temperature hump, and linear precipitation / distance /
    // competition / decay effects
    CovariateCatalog catalog;
    catalog.set_global("temperature", StepSeries(wt, temp));
    catalog.set_global("precipitation", StepSeries(wt, precip));
    catalog.set_dyadic_attr("distance", minutes);
    Eigen::VectorXd comp(kStations);
    for (int i = 0; i < kStations; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < kStations; ++j) {
            if (j != i) best = std::min(best, minutes(i, j));
        }
        comp[i] = best;
    }
    catalog.set_node_attr("competition", comp);
    catalog.set_time_of_day_origin(0.0);  // window starts at local midnight

    double tod_mean = 0.0;
    for (int i = 0; i < 2400; ++i) tod_mean += bimodal_tod(i * 0.01 + 0.005);
    tod_mean /= 2400.0;

    IntensitySpec spec;
    spec.risk = RiskPolicy::NoSelfLoops;
    spec.lambda0 = static_cast<double>(rows) /
                   (14.0 * 86400.0 * kStations * (kStations - 1));
    spec.smooth_terms = {
        {CovariateRef{CovariateRef::Kind::TimeOfDay, ""},
         [tod_mean](double h) { return bimodal_tod(h) - tod_mean; }},
        {CovariateRef{CovariateRef::Kind::Global, "temperature"},
         [](double x) {
             const double d = x - 24.0;
             return 0.04 * d - 0.012 * d * d;
         }},
    };
    spec.linear_terms = {
        {CovariateRef{CovariateRef::Kind::Global, "precipitation",
                      ValueTransform::Log1p},
         -0.25},
        {CovariateRef{CovariateRef::Kind::Dyadic, "distance", ValueTransform::Log},
         -0.35},
        {CovariateRef{CovariateRef::Kind::NodeSender, "competition"}, -0.20},
        {CovariateRef{CovariateRef::Kind::NodeReceiver, "competition"}, -0.18},
        {CovariateRef{CovariateRef::Kind::RepetitionDecay, "", ValueTransform::None,
                      6.0 * 3600.0},
         0.7},
        {CovariateRef{CovariateRef::Kind::ReciprocityDecay, "", ValueTransform::None,
                      12.0 * 3600.0},
         0.3},
    };

    // pilot run to calibrate lambda0: the planted negative effects shrink the
    // average rate by an a-priori unknown factor, and the study window has to
    // land inside the weather coverage
    TauLeapConfig pilot;
    pilot.target_events = std::max(50, rows / 20);
    pilot.rng_seed = seed;
    pilot.rng_stream = 19;
    pilot.node_count = kStations;
    double pilot_rate;
    try {
        const EventSequence ps = simulate_tau_leap(spec, catalog, pilot);
        pilot_rate = static_cast<double>(ps.size()) / ps.events().back().time;
    } catch (const TruncationError& e) {
        const EventSequence& ps = e.partial_sequence;
        if (ps.size() < 10) throw;
        pilot_rate = static_cast<double>(ps.size()) / ps.events().back().time;
    }
    const double target_rate = static_cast<double>(rows) / (14.0 * 86400.0);
    spec.lambda0 *= target_rate / pilot_rate;

    TauLeapConfig leap;
    leap.target_events = rows;
    leap.rng_seed = seed;
    leap.rng_stream = 17;
    leap.node_count = kStations;
    leap.max_time = weather_span - 86400.0;  // stay inside weather coverage
    const EventSequence seq = simulate_tau_leap(spec, catalog, leap);

    {
        auto out = open_out(paths.rides);
        out << "ride_id,started_at,start_station_id,end_station_id\n";
        int id = 0;
        for (const Event& e : seq.events()) {
            out << "R" << ++id << ',' << format_timestamp(start_epoch + e.time) << ','
                << station_label(e.dyad.sender) << ',' << station_label(e.dyad.receiver)
                << '\n';
        }
    }

    // centered planted curve on a fine grid, for validating the fitted smooth
    const int m = 480;
    paths.tod_grid.resize(m);
    paths.tod_planted.resize(m);
    double grid_mean = 0.0;
    for (int i = 0; i < m; ++i) {
        paths.tod_grid[i] = 24.0 * i / static_cast<double>(m);
        paths.tod_planted[i] = bimodal_tod(paths.tod_grid[i]);
        grid_mean += paths.tod_planted[i];
    }
    grid_mean /= m;
    for (int i = 0; i < m; ++i) paths.tod_planted[i] -= grid_mean;
    {
        auto out = open_out(paths.planted_tod);
        out << "hour,value\n";
        char buf[64];
        for (int i = 0; i < m; ++i) {
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g", paths.tod_grid[i],
                          paths.tod_planted[i]);
            out << buf << '\n';
        }
    }
    return paths;
}

RunConfig bike_fixture_config(const FixturePaths& paths, std::uint64_t seed) {
    nlohmann::json j;
    j["scenario"] = "observational";
    j["seed"] = seed;
    j["nu"] = 1.0;
    j["risk"] = "no-self-loops";
    j["data"] = {{"events", paths.rides},
                 {"temperature", paths.temperature},
                 {"precipitation", paths.precipitation},
                 {"distances", paths.distances}};
    j["smoothing"] = {{"grid", {1e-2, 1.0, 1e2}}, {"folds", 5}, {"sweeps", 1},
                      {"seed", 7}};
    return parse_config(j.dump(2));
}

}  // namespace rem
