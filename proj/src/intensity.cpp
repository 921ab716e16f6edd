#include "rem/intensity.hpp"

#include <cmath>

namespace rem {

double log_relative_intensity(const IntensitySpec& spec, const CovariateCatalog& catalog,
                              const Dyad& dyad, double t, const EventSequence& history) {
    double eta = 0.0;
    for (const auto& [ref, coef] : spec.linear_terms) {
        eta += coef * eval_covariate(ref, catalog, history, dyad, t);
    }
    for (const auto& [ref, fn] : spec.smooth_terms) {
        eta += fn(eval_covariate(ref, catalog, history, dyad, t));
    }
    if (spec.global_time_effect) eta += spec.global_time_effect(t);
    if (!std::isfinite(eta)) {
        throw NumericError("non-finite intensity exponent at t=" + std::to_string(t));
    }
    return eta;
}

double eval_intensity(const IntensitySpec& spec, const CovariateCatalog& catalog,
                      const Dyad& dyad, double t, const EventSequence& history) {
    if (!(spec.lambda0 > 0.0)) throw ConfigError("IntensitySpec: lambda0 must be > 0");
    if (!policy_admits(spec.risk, dyad)) return 0.0;
    return spec.lambda0 *
           std::exp(log_relative_intensity(spec, catalog, dyad, t, history));
}

}  // namespace rem
