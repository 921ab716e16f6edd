#include "rem/endostats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rem {

namespace {

Dyad relevant_dyad(DecayKind kind, const Dyad& d) {
    return kind == DecayKind::Repetition ? d : Dyad{d.receiver, d.sender};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double decay_value(const DecayStat& stat, const EventSequence& history,
                   const Dyad& dyad, double t) {
    const double t_last = history.last_before(relevant_dyad(stat.kind, dyad), t);
    if (t_last < 0.0) return 0.0;
    return std::exp(-(t - t_last) / (2.0 * stat.half_scale));
}

int repetition_indicator(const EventSequence& history, const Dyad& dyad, double t) {
    return history.count_before(dyad, t) > 0 ? 1 : 0;
}

MedianEstimates estimate_medians(const EventSequence& seq) {
    std::vector<double> rep_gaps, rec_gaps;
    for (const Event& e : seq.events()) {
        const double prev_same = seq.last_before(e.dyad, e.time);
        if (prev_same >= 0.0) rep_gaps.push_back(e.time - prev_same);
        const double prev_rec =
            seq.last_before(Dyad{e.dyad.receiver, e.dyad.sender}, e.time);
        if (prev_rec >= 0.0) rec_gaps.push_back(e.time - prev_rec);
    }
    MedianEstimates out;
    if (!rep_gaps.empty()) out.m_rep = median(std::move(rep_gaps));
    if (!rec_gaps.empty()) out.m_rec = median(std::move(rec_gaps));
    return out;
}

Eigen::VectorXd competition(const Eigen::MatrixXd& distance_matrix) {
    const Eigen::Index p = distance_matrix.rows();
    Eigen::VectorXd out(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i == j) continue;
            const double d = distance_matrix(i, j);
            if (std::isfinite(d) && d < best) best = d;
        }
        out[i] = std::isfinite(best) ? best
                                     : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace rem
