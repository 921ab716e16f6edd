#ifndef REM_FITTER_HPP
#define REM_FITTER_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rem/design.hpp"

namespace rem {

struct FitOptions {
    int max_iter = 100;
    double tol = 1e-8;             // relative penalized-deviance change
    double ridge = 1e-10;          // jitter on exact singularity
    double separation_norm = 1e3;  // estimate norm that flags separation
};

struct SmoothingPolicy {
    std::vector<double> grid;  // empty selects the default log-spaced grid
    int folds = 10;
    int sweeps = 2;            // coordinate-descent passes over the smooths
    std::uint64_t seed = 0;    // fold shuffling
};

std::vector<double> default_lambda_grid();

struct FitResult {
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd covariance;            // penalized-information inverse
    std::vector<double> smoothing_params;  // per block; 0 for unpenalized blocks
    std::vector<double> edf;               // per block
    double deviance = 0.0;
    bool converged = false;
    bool separation = false;
    int iterations = 0;
    int dropped_rows = 0;
    std::vector<std::string> inestimable_terms;
    std::vector<std::string> notes;
};

// Penalized IRLS for the all-success, no-intercept logistic model
// max  sum_k log pi_k(theta) - 1/2 sum_b lambda_b theta_b' S_b theta_b.
FitResult fit_degenerate_logistic(const DifferenceDesign& design,
                                  const std::vector<double>& lambdas,
                                  const FitOptions& options = {});

// Per-smooth lambda by K-fold cross-validated mean predicted deviance over
// the grid, with the one-standard-error rule: the largest lambda whose
// criterion lies within one fold-SE of the minimum wins (and a note records
// when that differs from the argmin). Returns one value per block (0 for
// unpenalized blocks).
std::vector<double> select_smoothing(const DifferenceDesign& design,
                                     const SmoothingPolicy& policy,
                                     std::vector<std::string>* notes = nullptr,
                                     std::vector<std::vector<double>>* profiles = nullptr);

// selection followed by a full fit
FitResult fit_additive(const DifferenceDesign& design, const SmoothingPolicy& policy,
                       const FitOptions& options = {});

// Firth-type bias-reduced fit; parametric (unpenalized) terms only.
FitResult firth_adjust(const DifferenceDesign& design, const FitOptions& options = {});

struct SmoothCurve {
    std::vector<double> grid;
    Eigen::VectorXd fit;
    Eigen::VectorXd se;
    std::vector<bool> extrapolated;
};

SmoothCurve predict_smooth(const FitResult& fit, const DifferenceDesign& design,
                           const std::string& term, const std::vector<double>& grid);

// pi(1-pi) * row_j^2 per coefficient: the two-point variance of B_j
Eigen::VectorXd observed_information_row(const FitResult& fit,
                                         const DifferenceDesign& design, int row);

// unpenalized log-likelihood of the all-success logistic model
double degenerate_loglik(const DifferenceDesign& design, const Eigen::VectorXd& theta);

}  // namespace rem

#endif
