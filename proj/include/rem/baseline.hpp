#ifndef REM_BASELINE_HPP
#define REM_BASELINE_HPP

#include <functional>
#include <vector>

#include "rem/design.hpp"
#include "rem/fitter.hpp"

namespace rem {

// Fitted log-relative-intensity eta_sr(t): every fitted term evaluated on the
// original timeline. Centering offsets stay inside; the Breslow slope picks
// up whatever multiplicative constant they leave over.
class FittedPredictor {
public:
    FittedPredictor(const FitResult& fit, const DifferenceDesign& design,
                    std::vector<TermSpec> terms, const CovariateCatalog& catalog,
                    const EventSequence& history);

    double eta(const Dyad& dyad, double t) const;

private:
    const FitResult* fit_;
    const DifferenceDesign* design_;
    std::vector<TermSpec> terms_;
    const CovariateCatalog* catalog_;
    const EventSequence* history_;
};

struct BreslowCurve {
    std::vector<double> times;   // event times
    std::vector<double> values;  // cumulative estimator, non-decreasing
};

// Step estimator on the ORIGINAL (unshifted) process: at each event time the
// curve increments by 1 / sum_{at-risk} exp(eta).
BreslowCurve breslow_cumulative(const EventSequence& seq, RiskPolicy policy,
                                const std::function<double(const Dyad&, double)>& eta);

struct Lambda0Estimate {
    double slope = 0.0;
    double se = 0.0;
};

// OLS of Breslow values on event times with the intercept fixed at zero.
Lambda0Estimate estimate_lambda0(const BreslowCurve& curve);

}  // namespace rem

#endif
