#include "rem/basis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

namespace rem {

namespace {

// Cox-de Boor: values of all B-splines of the given degree at x. knots has
// nbasis + degree + 1 entries; the returned vector has nbasis entries.
Eigen::VectorXd bspline_row(const std::vector<double>& knots, int degree, double x) {
    const int nbasis = static_cast<int>(knots.size()) - degree - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nbasis);
    // interval index mu with knots[mu] <= x < knots[mu+1], restricted to the
    // support of actual basis functions
    int mu = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), x) -
                              knots.begin()) - 1;
    mu = std::clamp(mu, degree, nbasis - 1);
    // triangular scheme for the degree+1 non-zero splines on that interval
    std::vector<double> b(degree + 1, 0.0);
    b[0] = 1.0;
    for (int d = 1; d <= degree; ++d) {
        double saved = 0.0;
        for (int r = 0; r < d; ++r) {
            const int i = mu - d + 1 + r;
            const double denom = knots[i + d] - knots[i];
            const double alpha = denom > 0.0 ? (x - knots[i]) / denom : 0.0;
            const double tmp = b[r];
            b[r] = saved + (1.0 - alpha) * tmp;
            saved = alpha * tmp;
        }
        b[d] = saved;
    }
    for (int r = 0; r <= degree; ++r) {
        const int j = mu - degree + r;
        if (j >= 0 && j < nbasis) out[j] = b[r];
    }
    return out;
}

// Second-order divided differences over the Greville abscissae
// xi_j = mean(knots[j+1..j+degree]). Because sum_j xi_j B_j(x) = x, any
// coefficient vector representing a straight line in x is annihilated even on
// non-uniform knots; plain index differences would penalize it.
Eigen::MatrixXd second_difference_penalty(const std::vector<double>& knots,
                                          int degree, int nbasis) {
    std::vector<double> xi(nbasis);
    for (int j = 0; j < nbasis; ++j) {
        double s = 0.0;
        for (int k = 1; k <= degree; ++k) s += knots[j + k];
        xi[j] = s / degree;
    }
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(nbasis - 2, nbasis);
    for (int i = 0; i < nbasis - 2; ++i) {
        const double left = xi[i + 1] - xi[i];
        const double right = xi[i + 2] - xi[i + 1];
        const double mid = 2.0 / (xi[i + 2] - xi[i]);
        d2(i, i) = mid / left;
        d2(i, i + 1) = -mid / left - mid / right;
        d2(i, i + 2) = mid / right;
    }
    return d2.transpose() * d2;
}

// lambda grids are shared across covariates of wildly different scales, so
// every penalty is normalized to trace equal to its dimension
Eigen::MatrixXd trace_normalized(Eigen::MatrixXd s) {
    const double tr = s.trace();
    if (tr > 0.0) s *= static_cast<double>(s.rows()) / tr;
    return s;
}

Eigen::MatrixXd cyclic_second_difference_penalty(int nbasis) {
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(nbasis, nbasis);
    for (int i = 0; i < nbasis; ++i) {
        d2(i, (i + nbasis - 1) % nbasis) += 1.0;
        d2(i, i) += -2.0;
        d2(i, (i + 1) % nbasis) += 1.0;
    }
    return d2.transpose() * d2;
}

std::vector<double> quantiles(std::vector<double> data, int count) {
    std::sort(data.begin(), data.end());
    std::vector<double> out(count);
    const double n = static_cast<double>(data.size());
    for (int i = 0; i < count; ++i) {
        const double q = static_cast<double>(i) / (count - 1);
        const double pos = q * (n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        out[i] = lo + 1 < data.size() ? (1.0 - frac) * data[lo] + frac * data[lo + 1]
                                      : data.back();
    }
    return out;
}

}  // namespace

BasisSpec BasisSpec::build(BasisKind kind, int rank, const std::vector<double>& data,
                           const BasisOptions& options) {
    if (data.empty()) throw ConfigError("build_basis: empty construction sample");
    BasisSpec spec;
    spec.kind_ = kind;
    spec.data_min_ = *std::min_element(data.begin(), data.end());
    spec.data_max_ = *std::max_element(data.begin(), data.end());

    if (kind == BasisKind::Linear) {
        if (spec.data_max_ == spec.data_min_) {
            throw ConfigError("build_basis: zero-variance covariate for linear term");
        }
        spec.raw_rank_ = 1;
        double mean = 0.0;
        for (double x : data) mean += x;
        spec.center_ = mean / static_cast<double>(data.size());
        spec.penalty_ = Eigen::MatrixXd::Zero(1, 1);
        spec.raw_penalty_ = spec.penalty_;
        return spec;
    }

    if (rank < 4) throw ConfigError("build_basis: spline kinds need rank >= 4");
    const int degree = 3;
    spec.degree_ = degree;

    if (kind == BasisKind::CyclicPSpline) {
        if (!(options.period > 0.0)) {
            throw ConfigError("build_basis: cyclic kind needs a positive period");
        }
        spec.period_ = options.period;
        spec.raw_rank_ = rank;
        // uniform knots on the period, extended by the degree on both sides;
        // columns past the rank fold back onto the leading ones
        const double h = options.period / rank;
        const int nbasis_full = rank + degree;
        spec.fold_ = nbasis_full;
        spec.knots_.clear();
        for (int i = -degree; i <= nbasis_full; ++i) {
            spec.knots_.push_back(i * h);
        }
    } else {
        const std::set<double> distinct(data.begin(), data.end());
        int r = rank;
        if (static_cast<int>(distinct.size()) < r) {
            r = std::max(4, static_cast<int>(distinct.size()));
            spec.rank_reduced_ = true;
        }
        if (distinct.size() < 2) {
            throw ConfigError("build_basis: zero-variance covariate");
        }
        spec.raw_rank_ = r;
        const int nbreaks = r - degree + 1;
        std::vector<double> breaks =
            options.quantile_knots
                ? quantiles(data, nbreaks)
                : [&] {
                      std::vector<double> b(nbreaks);
                      for (int i = 0; i < nbreaks; ++i) {
                          b[i] = spec.data_min_ + (spec.data_max_ - spec.data_min_) *
                                                      i / (nbreaks - 1);
                      }
                      return b;
                  }();
        // collapse duplicated quantiles, reducing the rank as needed
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        if (static_cast<int>(breaks.size()) < nbreaks) {
            spec.rank_reduced_ = true;
            spec.raw_rank_ = static_cast<int>(breaks.size()) + degree - 1;
            if (spec.raw_rank_ < 4) {
                throw ConfigError("build_basis: too few distinct values for a spline");
            }
        }
        const double h0 = breaks[1] - breaks[0];
        const double h1 = breaks[breaks.size() - 1] - breaks[breaks.size() - 2];
        spec.knots_.clear();
        for (int i = degree; i >= 1; --i) spec.knots_.push_back(breaks.front() - i * h0);
        spec.knots_.insert(spec.knots_.end(), breaks.begin(), breaks.end());
        for (int i = 1; i <= degree; ++i) spec.knots_.push_back(breaks.back() + i * h1);
    }

    const int B = spec.raw_rank_;
    spec.raw_penalty_ = trace_normalized(
        kind == BasisKind::CyclicPSpline
            ? cyclic_second_difference_penalty(B)
            : second_difference_penalty(spec.knots_, degree, B));

    // sum-to-zero constraint over the construction sample
    Eigen::VectorXd colmeans = Eigen::VectorXd::Zero(B);
    for (double x : data) colmeans += spec.raw_eval(x);
    colmeans /= static_cast<double>(data.size());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(colmeans);
    Eigen::MatrixXd q = qr.householderQ();
    spec.Z_ = q.rightCols(B - 1);
    spec.penalty_ = spec.Z_.transpose() * spec.raw_penalty_ * spec.Z_;
    return spec;
}

int BasisSpec::dim() const {
    return kind_ == BasisKind::Linear ? 1 : raw_rank_ - 1;
}

int BasisSpec::null_space_dim() const {
    switch (kind_) {
        case BasisKind::Linear: return 1;
        case BasisKind::PSpline: return 1;       // the linear direction survives centering
        case BasisKind::CyclicPSpline: return 0;  // only constants are unpenalized
    }
    return 0;
}

Eigen::VectorXd BasisSpec::raw_eval(double x) const {
    if (kind_ == BasisKind::Linear) {
        Eigen::VectorXd v(1);
        v[0] = x;
        return v;
    }
    if (kind_ == BasisKind::CyclicPSpline) {
        double xm = std::fmod(x, period_);
        if (xm < 0.0) xm += period_;
        const Eigen::VectorXd full = bspline_row(knots_, degree_, xm);
        Eigen::VectorXd folded = Eigen::VectorXd::Zero(raw_rank_);
        for (int j = 0; j < fold_; ++j) folded[j % raw_rank_] += full[j];
        return folded;
    }
    const double xc = std::clamp(x, knots_[degree_], knots_[knots_.size() - degree_ - 1]);
    return bspline_row(knots_, degree_, xc);
}

Eigen::VectorXd BasisSpec::eval(double x) const {
    if (kind_ == BasisKind::Linear) {
        Eigen::VectorXd v(1);
        v[0] = x - center_;
        return v;
    }
    return Z_.transpose() * raw_eval(x);
}

Eigen::MatrixXd BasisSpec::eval_matrix(const std::vector<double>& xs) const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), dim());
    for (std::size_t i = 0; i < xs.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = eval(xs[i]);
    return m;
}

bool BasisSpec::in_range(double x) const {
    if (kind_ == BasisKind::CyclicPSpline) return true;  // wraps on its period
    return x >= data_min_ && x <= data_max_;
}

}  // namespace rem
