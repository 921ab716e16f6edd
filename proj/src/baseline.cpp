#include "rem/baseline.hpp"

#include <cmath>

namespace rem {

FittedPredictor::FittedPredictor(const FitResult& fit, const DifferenceDesign& design,
                                 std::vector<TermSpec> terms,
                                 const CovariateCatalog& catalog,
                                 const EventSequence& history)
    : fit_(&fit),
      design_(&design),
      terms_(std::move(terms)),
      catalog_(&catalog),
      history_(&history) {
    if (terms_.size() != design_->blocks.size()) {
        throw ConfigError("FittedPredictor: terms and design blocks must align");
    }
}

double FittedPredictor::eta(const Dyad& dyad, double t) const {
    double out = 0.0;
    for (std::size_t b = 0; b < terms_.size(); ++b) {
        const TermBlock& block = design_->blocks[b];
        const double v = eval_covariate(terms_[b].covariate, *catalog_, *history_, dyad, t);
        out += block.basis.eval(v).dot(
            fit_->coefficients.segment(block.col0, block.ncols));
    }
    return out;
}

BreslowCurve breslow_cumulative(const EventSequence& seq, RiskPolicy policy,
                                const std::function<double(const Dyad&, double)>& eta) {
    const std::vector<Dyad> dyads = policy_dyads(policy, seq.node_count());
    if (dyads.empty()) throw ConfigError("breslow_cumulative: empty risk set");
    BreslowCurve curve;
    curve.times.reserve(seq.size());
    curve.values.reserve(seq.size());
    double cum = 0.0;
    for (const Event& e : seq.events()) {
        double denom = 0.0;
        for (const Dyad& d : dyads) denom += std::exp(eta(d, e.time));
        if (!(denom > 0.0) || !std::isfinite(denom)) {
            throw ConfigError("breslow_cumulative: degenerate risk-set sum at t=" +
                              std::to_string(e.time));
        }
        cum += 1.0 / denom;
        curve.times.push_back(e.time);
        curve.values.push_back(cum);
    }
    return curve;
}

Lambda0Estimate estimate_lambda0(const BreslowCurve& curve) {
    const std::size_t m = curve.times.size();
    if (m < 2) throw ConfigError("estimate_lambda0: need at least 2 event times");
    double stt = 0.0, stv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        stt += curve.times[i] * curve.times[i];
        stv += curve.times[i] * curve.values[i];
    }
    if (!(stt > 0.0)) throw ConfigError("estimate_lambda0: degenerate regression");
    Lambda0Estimate est;
    est.slope = stv / stt;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = curve.values[i] - est.slope * curve.times[i];
        rss += r * r;
    }
    est.se = std::sqrt(rss / (static_cast<double>(m) - 1.0) / stt);
    return est;
}

}  // namespace rem
