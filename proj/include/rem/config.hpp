#ifndef REM_CONFIG_HPP
#define REM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rem/design.hpp"
#include "rem/fitter.hpp"
#include "rem/types.hpp"

namespace rem {

// Two-level square wave used as the global covariate x(t) in the synthetic
// scenario; expressed as a pure function of t so any horizon is covered.
struct WaveConfig {
    double period = 0.2;
    double low = 0.0;
    double high = 1.0;
    double duty = 0.5;
};

// True generating coefficients of the synthetic scenario.
struct TruthConfig {
    double lambda0 = 1.0;
    double beta1 = 0.5;    // sender attribute x_s
    double beta2 = -1.0;   // dyadic |x_s - x_r|
    double beta_rep = 1.5; // repetition indicator
    double beta0 = -0.7;   // global covariate x(t)
};

struct SmoothingConfig {
    std::vector<double> grid;  // empty -> default log-spaced grid
    int folds = 10;
    int sweeps = 2;
    std::uint64_t seed = 0;
};

// Input files for the observational (bike-share style) pipeline.
struct DataConfig {
    std::string events;
    std::string temperature;
    std::string precipitation;
    std::string distances;
    std::optional<std::string> window_start;
    std::optional<std::string> window_end;
    double max_gap_seconds = 4.0 * 3600.0;
};

struct StudyConfig {
    std::string sweep = "n";  // n | p | nu
    std::vector<double> values;
    int replications = 50;
    int workers = 1;
};

struct CompareSection {
    std::vector<int> sample_sizes{100, 500, 2000};
    int replications = 500;
    double shape = 0.1;
    int workers = 1;
};

struct RunConfig {
    std::string scenario = "synthetic";  // synthetic | weibull | observational
    int nodes = 15;
    int events = 3000;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    double nu = 1.0;
    double tau = 0.0;  // <= 0 -> adaptive
    RiskPolicy risk = RiskPolicy::NoSelfLoops;
    TruthConfig truth;
    WaveConfig wave;
    std::vector<TermSpec> terms;  // empty -> scenario default model
    SmoothingConfig smoothing;
    DataConfig data;
    StudyConfig study;
    CompareSection compare;
    std::string raw_text;  // canonical config bytes, for the manifest digest
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// FNV-1a over raw bytes; the manifest's digest primitive
std::uint64_t fnv1a(const std::string& bytes);
std::string fnv1a_hex(const std::string& bytes);
std::string file_digest_hex(const std::string& path);

// default model terms for the synthetic scenario: four linear effects plus a
// penalized smooth of t
std::vector<TermSpec> synthetic_terms(int time_rank = 10);

// default model terms for the observational scenario: seven smooths plus the
// two competition coefficients
std::vector<TermSpec> observational_terms(double m_rep, double m_rec);

}  // namespace rem

#endif
