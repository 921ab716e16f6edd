#ifndef REM_INTENSITY_HPP
#define REM_INTENSITY_HPP

#include <functional>
#include <string>
#include <vector>

#include "rem/covariates.hpp"
#include "rem/types.hpp"

namespace rem {

// lambda_sr(t) = Y_sr(t) * lambda0 * exp{ sum_l f_l(x_sr^(l)(t)) + g0(t)
//                                         + sum_h g_h(x^(h)(t)) }
// Linear terms carry a coefficient; smooth terms carry the true function
// handle used by the simulator.
struct IntensitySpec {
    double lambda0 = 1.0;
    std::vector<std::pair<CovariateRef, double>> linear_terms;
    std::vector<std::pair<CovariateRef, std::function<double(double)>>> smooth_terms;
    std::function<double(double)> global_time_effect;  // g0, optional
    RiskPolicy risk = RiskPolicy::NoSelfLoops;
};

// log lambda_sr(t) - log lambda0 for an at-risk dyad
double log_relative_intensity(const IntensitySpec& spec, const CovariateCatalog& catalog,
                              const Dyad& dyad, double t, const EventSequence& history);

// full rate; exactly 0 for dyads outside the risk policy
double eval_intensity(const IntensitySpec& spec, const CovariateCatalog& catalog,
                      const Dyad& dyad, double t, const EventSequence& history);

}  // namespace rem

#endif
