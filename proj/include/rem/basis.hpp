#ifndef REM_BASIS_HPP
#define REM_BASIS_HPP

#include <Eigen/Core>
#include <vector>

#include "rem/types.hpp"

namespace rem {

enum class BasisKind { Linear, PSpline, CyclicPSpline };

struct BasisOptions {
    double period = 0.0;       // cyclic kind only
    bool quantile_knots = true;  // evenly spaced otherwise
};

// Smoothing basis with a sum-to-zero centering constraint fitted on the
// construction sample. Spline kinds are cubic B-splines with a second-order
// difference penalty; the cyclic kind ties coefficients on a period.
class BasisSpec {
public:
    static BasisSpec build(BasisKind kind, int rank, const std::vector<double>& data,
                           const BasisOptions& options = {});

    BasisKind kind() const { return kind_; }
    int raw_rank() const { return raw_rank_; }
    bool rank_reduced() const { return rank_reduced_; }
    int dim() const;                       // constrained dimension
    int null_space_dim() const;            // unpenalized directions after centering
    const Eigen::MatrixXd& penalty() const { return penalty_; }

    Eigen::VectorXd eval(double x) const;  // constrained, centered basis row
    Eigen::MatrixXd eval_matrix(const std::vector<double>& xs) const;

    double data_min() const { return data_min_; }
    double data_max() const { return data_max_; }
    double period() const { return period_; }
    bool in_range(double x) const;

    // raw (unconstrained) row, exposed for direct checks on the penalty
    Eigen::VectorXd raw_eval(double x) const;
    const Eigen::MatrixXd& raw_penalty() const { return raw_penalty_; }
    const Eigen::MatrixXd& constraint_transform() const { return Z_; }

private:
    BasisKind kind_ = BasisKind::Linear;
    int raw_rank_ = 1;
    bool rank_reduced_ = false;
    double data_min_ = 0.0, data_max_ = 0.0;
    double period_ = 0.0;
    double center_ = 0.0;             // linear kind
    std::vector<double> knots_;       // full knot vector, spline kinds
    int degree_ = 3;
    int fold_ = 0;                    // raw columns before cyclic folding
    Eigen::MatrixXd Z_;               // raw_rank x (raw_rank - 1)
    Eigen::MatrixXd penalty_;         // constrained
    Eigen::MatrixXd raw_penalty_;
};

}  // namespace rem

#endif
