#ifndef REM_SIMULATOR_HPP
#define REM_SIMULATOR_HPP

#include <cstdint>
#include <optional>

#include "rem/intensity.hpp"
#include "rem/rng.hpp"

namespace rem {

struct TauLeapConfig {
    double tau = 0.0;        // leap width; <= 0 selects the adaptive default
    int target_events = 1;   // n
    std::uint64_t rng_seed = 0;
    std::uint64_t rng_stream = 0;  // independent stream per replication
    int node_count = 2;
    std::optional<double> max_time;
};

class DegenerateProcessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& msg, EventSequence partial)
        : std::runtime_error(msg), partial_sequence(std::move(partial)) {}
    EventSequence partial_sequence;
};

// Inhomogeneous Poisson simulation over the at-risk dyads. The total rate is
// frozen at its left-endpoint value within each leap; inter-arrival times are
// exponential against the frozen rate and the occurring dyad is multinomial
// with probabilities proportional to the per-dyad intensities. The rate
// vector is re-anchored at every accepted event, since endogenous covariates
// jump exactly there.
EventSequence simulate_tau_leap(const IntensitySpec& spec, const CovariateCatalog& catalog,
                                const TauLeapConfig& cfg);

// Benchmark process: all p^2 ordered pairs (self-loops included) share the
// Weibull hazard exp{log(kappa) + (kappa-1) log(t)}, scale 1. Event times are
// drawn exactly by inverting the cumulative total rate p^2 t^kappa; dyads are
// uniform.
EventSequence simulate_weibull(int p, int n, double shape, std::uint64_t seed,
                               std::uint64_t stream = 0);

}  // namespace rem

#endif
