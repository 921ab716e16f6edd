#ifndef REM_STUDIES_HPP
#define REM_STUDIES_HPP

#include <string>
#include <vector>

#include "rem/config.hpp"

namespace rem {

// One simulate-shift-fit replication of the synthetic scenario.
struct ReplicationMetrics {
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta_rep = 0.0;
    double beta0 = 0.0;
    double l2_g0 = 0.0;
    double dropped_fraction = 0.0;
    bool converged = false;
};

// Fresh node attributes, event sequence, shifts and control draws per
// replication; every random input runs on its own counter stream so
// replications are order-independent.
ReplicationMetrics run_synthetic_replication(const RunConfig& base, int p, int n,
                                             double nu, std::uint64_t rep);

struct StudySummaryRow {
    double value = 0.0;  // swept parameter value
    std::string metric;
    double mean = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    int failures = 0;  // replications that did not converge
};

// Replication sweep over n, p or nu; emits boxplot quantiles of each
// coefficient estimate, the L2 distance of the fitted g0 from the truth, and
// the dropped-uninformative fraction.
std::vector<StudySummaryRow> run_study_sweep(const RunConfig& cfg);

}  // namespace rem

#endif
