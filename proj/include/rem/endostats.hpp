#ifndef REM_ENDOSTATS_HPP
#define REM_ENDOSTATS_HPP

#include <Eigen/Core>
#include <optional>

#include "rem/types.hpp"

namespace rem {

enum class DecayKind { Repetition, Reciprocity };

// Exponential decay of the elapsed time since the most recent same (or
// reciprocal) event, normalized by twice the median elapsed time m:
//   exp{-(t - t_last) / (2 m)},   0 when no relevant prior event exists.
struct DecayStat {
    DecayKind kind = DecayKind::Repetition;
    double half_scale = 1.0;  // m, the median normalizer
};

// History is queried strictly before t (left-continuous evaluation).
double decay_value(const DecayStat& stat, const EventSequence& history,
                   const Dyad& dyad, double t);

// 1 iff the dyad occurred strictly before t.
int repetition_indicator(const EventSequence& history, const Dyad& dyad, double t);

struct MedianEstimates {
    std::optional<double> m_rep;
    std::optional<double> m_rec;
};

// Medians of the finite elapsed times delta_rep / delta_rec observed at the
// event times of the sequence. Never-occurred (infinite) gaps are excluded.
MedianEstimates estimate_medians(const EventSequence& seq);

// Per-node distance to the closest other station, in the distance matrix's
// units. Entries with no finite off-diagonal distance come back as NaN.
Eigen::VectorXd competition(const Eigen::MatrixXd& distance_matrix);

}  // namespace rem

#endif
