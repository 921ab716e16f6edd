#ifndef REM_FULLIK_HPP
#define REM_FULLIK_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rem/covariates.hpp"
#include "rem/types.hpp"

namespace rem {

struct FullLikFit {
    Eigen::VectorXd coefficients;  // intercept first when included
    Eigen::VectorXd se;
    bool converged = false;
    int iterations = 0;
    int excluded_intervals = 0;  // zero-length inter-event intervals
};

// Approximate full likelihood with the intensity frozen at the left endpoint
// of each inter-event interval:
//   l(beta) = sum_i [ eta_{ev(i)}(t_i) - sum_{(s,r) in R(t_i)}
//                     exp(eta_sr(t_i)) * (t_i - t_{i-1}) ],
// a piecewise-exponential model, fitted by Newton iterations. Parametric
// terms only.
FullLikFit fit_piecewise_full_likelihood(const EventSequence& seq,
                                         const CovariateCatalog& catalog,
                                         const std::vector<CovariateRef>& terms,
                                         RiskPolicy policy,
                                         bool include_intercept = true,
                                         bool firth = false);

enum class CompareMethod { ShiftedPL, ShiftedPLFirth, FullLik, FullLikFirth };

std::string to_string(CompareMethod m);

struct CompareConfig {
    std::vector<int> sample_sizes;
    int replications = 500;
    int node_count = 5;
    double weibull_shape = 0.1;
    double nu = 1.0;
    std::uint64_t seed = 0;
    std::vector<CompareMethod> methods{CompareMethod::ShiftedPL,
                                       CompareMethod::ShiftedPLFirth,
                                       CompareMethod::FullLik,
                                       CompareMethod::FullLikFirth};
    int workers = 1;
};

struct CompareCell {
    CompareMethod method;
    int n = 0;
    double mean = 0.0;
    double q025 = 0.0;
    double q975 = 0.0;
    double mean_runtime_seconds = 0.0;
    std::vector<double> estimates;  // slope estimate per replication
};

// Paired-seed bias comparison on the Weibull benchmark: every method consumes
// the identical simulated sequence within a replication.
std::vector<CompareCell> compare_bias(const CompareConfig& cfg);

}  // namespace rem

#endif
