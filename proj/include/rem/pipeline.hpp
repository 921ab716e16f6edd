#ifndef REM_PIPELINE_HPP
#define REM_PIPELINE_HPP

#include <functional>
#include <string>
#include <vector>

#include "rem/baseline.hpp"
#include "rem/config.hpp"
#include "rem/fitter.hpp"
#include "rem/ingest.hpp"
#include "rem/intensity.hpp"
#include "rem/simulator.hpp"
#include "rem/timeshift.hpp"

namespace rem {

inline constexpr const char* kVersion = "1.0.0";

// Generating model of the synthetic scenario: four linear effects, the linear
// global time effect g0(t) = t, and a two-level square-wave global covariate.
// Node attributes x_s ~ N(5, 1) are drawn from the supplied generator.
struct Scenario {
    IntensitySpec spec;
    CovariateCatalog catalog;
};

Scenario build_synthetic_scenario(const RunConfig& cfg, Rng& attr_rng);

// simulate the configured scenario (synthetic tau-leap or Weibull benchmark)
EventSequence simulate_scenario(const RunConfig& cfg, const Scenario* scenario);

// shift -> sample -> design -> smoothing selection -> fit, end to end
struct FitArtifacts {
    ShiftAssignment shifts;
    ShiftedCaseControlSet ccs;
    DifferenceDesign design;
    FitResult fit;
    std::vector<TermSpec> terms;
};

FitArtifacts fit_pipeline(const EventSequence& seq, const CovariateCatalog& catalog,
                          const std::vector<TermSpec>& terms, double nu,
                          std::uint64_t seed, std::uint64_t stream,
                          const SmoothingConfig& smoothing, RiskPolicy risk);

// L2 distance between the fitted smooth of t and the true g0, both centered
// on a 512-point trapezoid grid over [0, t_max] (the multiplicative level is
// the baseline's job, so only shape differences count).
double g0_l2_distance(const FitResult& fit, const DifferenceDesign& design,
                      const std::string& term,
                      const std::function<double(double)>& g0_true, double t_max);

// Observational inputs assembled into the core's terms: events, two hourly
// weather series, a distance matrix, per-node competition, and the decay
// medians estimated from the event sequence itself.
struct ObservationalData {
    EventSequence events;
    CovariateCatalog catalog;
    StationIndex stations;
    IngestReport report;
    MedianEstimates medians;
};

ObservationalData load_observational(const RunConfig& cfg);

// Subcommand bodies. Each writes its outputs plus manifest.json under
// out_dir; errors surface as exceptions for the CLI shell to report.
void cmd_simulate(const RunConfig& cfg, const std::string& out_dir);
void cmd_shift(const RunConfig& cfg, const std::string& out_dir);
void cmd_fit(const RunConfig& cfg, const std::string& out_dir);
void cmd_baseline(const RunConfig& cfg, const std::string& out_dir);
void cmd_compare(const RunConfig& cfg, const std::string& out_dir);
void cmd_study(const RunConfig& cfg, const std::string& out_dir);

}  // namespace rem

#endif
