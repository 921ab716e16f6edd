#include "rem/fitter.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "rem/rng.hpp"

namespace rem {

namespace {

constexpr double kWeightFloor = 1e-12;

double logistic(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

// -2 sum log pi with eta = X theta and every response a success
double deviance_of(const Eigen::VectorXd& eta) {
    double d = 0.0;
    for (Eigen::Index k = 0; k < eta.size(); ++k) {
        // log(1 + exp(-eta)), stable on both tails
        const double e = eta[k];
        d += 2.0 * (e > 0.0 ? std::log1p(std::exp(-e)) : -e + std::log1p(std::exp(e)));
    }
    return d;
}

Eigen::MatrixXd expanded_penalty(const DifferenceDesign& design,
                                 const std::vector<double>& lambdas) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(design.cols(), design.cols());
    for (std::size_t b = 0; b < design.blocks.size(); ++b) {
        const TermBlock& block = design.blocks[b];
        if (!block.penalized || lambdas[b] == 0.0) continue;
        P.block(block.col0, block.col0, block.ncols, block.ncols) =
            lambdas[b] * block.basis.penalty();
    }
    return P;
}

std::vector<int> active_columns(const Eigen::MatrixXd& x) {
    std::vector<int> cols;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (x.col(j).cwiseAbs().maxCoeff() > 0.0) cols.push_back(static_cast<int>(j));
    }
    return cols;
}

Eigen::MatrixXd select_cols(const Eigen::MatrixXd& x, const std::vector<int>& cols) {
    Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = x.col(cols[j]);
    return out;
}

Eigen::MatrixXd select_square(const Eigen::MatrixXd& m, const std::vector<int>& cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(cols.size()),
                        static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m(cols[i], cols[j]);
        }
    }
    return out;
}

// Solve A x = b with an LDLT, retrying with growing ridge jitter on failure.
Eigen::MatrixXd solve_with_jitter(Eigen::MatrixXd a, const Eigen::MatrixXd& b,
                                  double ridge) {
    for (int attempt = 0; attempt < 6; ++attempt) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
            Eigen::MatrixXd x = ldlt.solve(b);
            if (x.allFinite()) return x;
        }
        a.diagonal().array() += ridge;
        ridge *= 100.0;
    }
    throw NumericError("fitter: normal equations unsolvable even with ridge jitter");
}

struct IrlsFit {
    Eigen::VectorXd theta;       // full-width, zeros on inactive columns
    Eigen::VectorXd eta;
    double deviance = 0.0;
    bool converged = false;
    bool separation = false;
    int iterations = 0;
    Eigen::MatrixXd info_active;  // X'WX + P on active columns
    std::vector<int> active;
};

IrlsFit run_irls(const Eigen::MatrixXd& x, const Eigen::MatrixXd& penalty,
                 const FitOptions& options) {
    IrlsFit fit;
    fit.active = active_columns(x);
    const int n = static_cast<int>(x.rows());
    const int pa = static_cast<int>(fit.active.size());
    fit.theta = Eigen::VectorXd::Zero(x.cols());
    fit.eta = Eigen::VectorXd::Zero(n);
    fit.deviance = deviance_of(fit.eta);
    if (pa == 0) return fit;

    const Eigen::MatrixXd xa = select_cols(x, fit.active);
    const Eigen::MatrixXd pen = select_square(penalty, fit.active);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(pa);
    double pen_dev = fit.deviance;

    for (int it = 1; it <= options.max_iter; ++it) {
        fit.iterations = it;
        Eigen::VectorXd pi(n), w(n);
        for (int k = 0; k < n; ++k) {
            pi[k] = logistic(fit.eta[k]);
            w[k] = std::max(pi[k] * (1.0 - pi[k]), kWeightFloor);
        }
        const Eigen::MatrixXd xtwx = xa.transpose() * w.asDiagonal() * xa;
        const Eigen::VectorXd rhs =
            xa.transpose() * (w.cwiseProduct(fit.eta) + (1.0 - pi.array()).matrix());
        fit.info_active = xtwx + pen;
        const Eigen::VectorXd proposal =
            solve_with_jitter(fit.info_active, rhs, options.ridge);

        // step halving on penalized-deviance increase
        double step = 1.0;
        Eigen::VectorXd theta_new;
        double pen_dev_new = pen_dev;
        for (int h = 0; h < 30; ++h) {
            theta_new = theta + step * (proposal - theta);
            const Eigen::VectorXd eta_new = xa * theta_new;
            pen_dev_new = deviance_of(eta_new) + theta_new.dot(pen * theta_new);
            if (pen_dev_new <= pen_dev + 1e-12) break;
            step *= 0.5;
        }
        theta = theta_new;
        fit.eta = xa * theta;
        const double change = std::abs(pen_dev - pen_dev_new);
        pen_dev = pen_dev_new;
        fit.deviance = deviance_of(fit.eta);

        if (theta.cwiseAbs().maxCoeff() > options.separation_norm) {
            fit.separation = true;
            break;
        }
        if (change < options.tol * (std::abs(pen_dev) + 0.1)) {
            fit.converged = true;
            break;
        }
    }
    // refresh the information at the final iterate
    {
        Eigen::VectorXd pi(n), w(n);
        for (int k = 0; k < n; ++k) {
            pi[k] = logistic(fit.eta[k]);
            w[k] = std::max(pi[k] * (1.0 - pi[k]), kWeightFloor);
        }
        fit.info_active = xa.transpose() * w.asDiagonal() * xa + pen;
        // perfect prediction of every informative row is the other face of
        // separation: the deviance flattens out long before the norm blows up
        bool all_perfect = false;
        for (int k = 0; k < n; ++k) {
            if (xa.row(k).cwiseAbs().maxCoeff() == 0.0) continue;
            if (pi[k] < 1.0 - 1e-6) {
                all_perfect = false;
                break;
            }
            all_perfect = true;
        }
        if (all_perfect) fit.separation = true;
    }
    for (int j = 0; j < pa; ++j) fit.theta[fit.active[j]] = theta[j];
    return fit;
}

void fill_block_diagnostics(FitResult& out, const DifferenceDesign& design,
                            const IrlsFit& fit, const FitOptions& options) {
    const int p = design.cols();
    out.covariance = Eigen::MatrixXd::Zero(p, p);
    out.edf.assign(design.blocks.size(), 0.0);
    if (fit.active.empty()) return;

    const Eigen::MatrixXd vinv_active = fit.info_active;
    const Eigen::MatrixXd v_active = solve_with_jitter(
        vinv_active, Eigen::MatrixXd::Identity(vinv_active.rows(), vinv_active.cols()),
        options.ridge);
    std::vector<int> pos(p, -1);
    for (std::size_t j = 0; j < fit.active.size(); ++j) pos[fit.active[j]] = static_cast<int>(j);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (pos[i] >= 0 && pos[j] >= 0) out.covariance(i, j) = v_active(pos[i], pos[j]);
        }
    }
    // edf_b = trace over the block of (X'WX + P)^-1 X'WX
    Eigen::VectorXd pi = fit.eta.unaryExpr([](double e) { return logistic(e); });
    Eigen::VectorXd w = (pi.array() * (1.0 - pi.array())).cwiseMax(kWeightFloor);
    const Eigen::MatrixXd xtwx =
        design.rows.transpose() * w.asDiagonal() * design.rows;
    const Eigen::MatrixXd f = out.covariance * xtwx;
    for (std::size_t b = 0; b < design.blocks.size(); ++b) {
        const TermBlock& block = design.blocks[b];
        out.edf[b] = f.diagonal().segment(block.col0, block.ncols).sum();
    }
}

}  // namespace

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int i = -4; i <= 4; ++i) grid.push_back(std::pow(10.0, i));
    return grid;
}

double degenerate_loglik(const DifferenceDesign& design, const Eigen::VectorXd& theta) {
    return -0.5 * deviance_of(design.rows * theta);
}

FitResult fit_degenerate_logistic(const DifferenceDesign& design,
                                  const std::vector<double>& lambdas,
                                  const FitOptions& options) {
    if (design.n() == 0) throw ConfigError("fit_degenerate_logistic: empty design");
    if (lambdas.size() != design.blocks.size()) {
        throw ConfigError("fit_degenerate_logistic: one lambda per term block required");
    }
    bool any_active = false;
    FitResult out;
    for (const TermBlock& block : design.blocks) {
        bool block_active = false;
        for (int c = block.col0; c < block.col0 + block.ncols; ++c) {
            if (design.rows.col(c).cwiseAbs().maxCoeff() > 0.0) block_active = true;
        }
        if (!block_active) out.inestimable_terms.push_back(block.name);
        any_active = any_active || block_active;
    }
    if (!any_active) {
        throw ConfigError("fit_degenerate_logistic: no column with nonzero variance");
    }

    const Eigen::MatrixXd penalty = expanded_penalty(design, lambdas);
    const IrlsFit fit = run_irls(design.rows, penalty, options);

    out.coefficients = fit.theta;
    out.deviance = fit.deviance;
    out.converged = fit.converged;
    out.separation = fit.separation;
    out.iterations = fit.iterations;
    out.smoothing_params = lambdas;
    out.dropped_rows = design.dropped_rows;
    if (fit.separation) {
        out.notes.push_back("separation suspected: estimate norm exceeded " +
                            std::to_string(options.separation_norm) +
                            " with improving deviance; consider the Firth path");
    }
    fill_block_diagnostics(out, design, fit, options);
    return out;
}

std::vector<double> select_smoothing(const DifferenceDesign& design,
                                     const SmoothingPolicy& policy,
                                     std::vector<std::string>* notes,
                                     std::vector<std::vector<double>>* profiles) {
    std::vector<int> penalized;
    for (std::size_t b = 0; b < design.blocks.size(); ++b) {
        if (design.blocks[b].penalized) penalized.push_back(static_cast<int>(b));
    }
    if (penalized.empty()) {
        throw ConfigError("select_smoothing: no penalized term");
    }
    const std::vector<double> grid =
        policy.grid.empty() ? default_lambda_grid() : policy.grid;
    const int n = design.n();
    const int folds = std::min(policy.folds, n);

    // deterministic shuffled fold assignment
    std::vector<int> fold_of(n);
    {
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        Rng rng(policy.seed, 0x6f6c6473u);
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
            std::swap(order[i], order[j]);
        }
        for (int i = 0; i < n; ++i) fold_of[order[i]] = i % folds;
    }

    // returns the mean predicted deviance and its standard error across folds
    const auto cv_criterion = [&](const std::vector<double>& lambdas) {
        std::vector<double> fold_dev;
        double total = 0.0;
        for (int f = 0; f < folds; ++f) {
            std::vector<int> train, test;
            for (int k = 0; k < n; ++k) (fold_of[k] == f ? test : train).push_back(k);
            if (train.empty() || test.empty()) continue;
            DifferenceDesign sub;
            sub.blocks = design.blocks;
            sub.rows.resize(static_cast<Eigen::Index>(train.size()), design.cols());
            for (std::size_t i = 0; i < train.size(); ++i) {
                sub.rows.row(static_cast<Eigen::Index>(i)) = design.rows.row(train[i]);
            }
            FitOptions fast;
            fast.tol = 1e-7;
            const Eigen::MatrixXd penalty = expanded_penalty(sub, lambdas);
            const IrlsFit fit = run_irls(sub.rows, penalty, fast);
            double dev = 0.0;
            for (int k : test) {
                const double eta = design.rows.row(k).dot(fit.theta);
                dev += eta > 0.0 ? 2.0 * std::log1p(std::exp(-eta))
                                 : 2.0 * (-eta + std::log1p(std::exp(eta)));
            }
            total += dev;
            fold_dev.push_back(dev / static_cast<double>(test.size()));
        }
        double se = 0.0;
        if (fold_dev.size() > 1) {
            const double m = std::accumulate(fold_dev.begin(), fold_dev.end(), 0.0) /
                             static_cast<double>(fold_dev.size());
            double ss = 0.0;
            for (double d : fold_dev) ss += (d - m) * (d - m);
            se = std::sqrt(ss / (static_cast<double>(fold_dev.size()) - 1.0)) /
                 std::sqrt(static_cast<double>(fold_dev.size()));
        }
        return std::pair<double, double>{total / n, se};
    };

    std::vector<double> lambdas(design.blocks.size(), 0.0);
    for (int b : penalized) lambdas[b] = 1.0;
    if (profiles) profiles->assign(design.blocks.size(), {});

    const int sweeps = penalized.size() == 1 ? 1 : policy.sweeps;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int b : penalized) {
            std::vector<double> profile, ses;
            int best = 0;
            for (std::size_t g = 0; g < grid.size(); ++g) {
                std::vector<double> trial = lambdas;
                trial[b] = grid[g];
                const auto [crit, se] = cv_criterion(trial);
                profile.push_back(crit);
                ses.push_back(se);
                if (crit < profile[best]) best = static_cast<int>(g);
            }
            // one-standard-error rule: the largest lambda whose predicted
            // deviance is within one fold-SE of the minimum
            int chosen = best;
            for (int g = static_cast<int>(grid.size()) - 1; g > best; --g) {
                if (profile[g] <= profile[best] + ses[best]) {
                    chosen = g;
                    break;
                }
            }
            if (chosen != best && notes) {
                notes->push_back("'" + design.blocks[b].name + "': lambda " +
                                 std::to_string(grid[chosen]) +
                                 " within one SE of the CV minimum; preferred over " +
                                 std::to_string(grid[best]));
            }
            lambdas[b] = grid[chosen];
            if (profiles && sweep == sweeps - 1) (*profiles)[b] = profile;
        }
    }
    return lambdas;
}

FitResult fit_additive(const DifferenceDesign& design, const SmoothingPolicy& policy,
                       const FitOptions& options) {
    std::vector<std::string> notes;
    std::vector<double> lambdas;
    if (design.penalized_count() > 0) {
        lambdas = select_smoothing(design, policy, &notes);
    } else {
        lambdas.assign(design.blocks.size(), 0.0);
    }
    FitResult fit = fit_degenerate_logistic(design, lambdas, options);
    fit.notes.insert(fit.notes.end(), notes.begin(), notes.end());
    return fit;
}

FitResult firth_adjust(const DifferenceDesign& design, const FitOptions& options) {
    for (const TermBlock& block : design.blocks) {
        if (block.penalized) {
            throw ConfigError("firth_adjust: defined for parametric terms only, got smooth '" +
                              block.name + "'");
        }
    }
    if (design.n() == 0) throw ConfigError("firth_adjust: empty design");
    const Eigen::MatrixXd& x = design.rows;
    const std::vector<int> active = active_columns(x);
    const int n = design.n();
    const int pa = static_cast<int>(active.size());

    FitResult out;
    out.coefficients = Eigen::VectorXd::Zero(x.cols());
    out.covariance = Eigen::MatrixXd::Zero(x.cols(), x.cols());
    out.smoothing_params.assign(design.blocks.size(), 0.0);
    out.edf.assign(design.blocks.size(), 0.0);
    out.dropped_rows = design.dropped_rows;
    for (const TermBlock& block : design.blocks) {
        bool block_active = false;
        for (int c = block.col0; c < block.col0 + block.ncols; ++c) {
            if (x.col(c).cwiseAbs().maxCoeff() > 0.0) block_active = true;
        }
        if (!block_active) out.inestimable_terms.push_back(block.name);
    }
    if (pa == 0) throw ConfigError("firth_adjust: no column with nonzero variance");

    const Eigen::MatrixXd xa = select_cols(x, active);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(pa);
    Eigen::MatrixXd info(pa, pa);
    for (int it = 1; it <= options.max_iter; ++it) {
        out.iterations = it;
        const Eigen::VectorXd eta = xa * theta;
        Eigen::VectorXd pi(n), w(n);
        for (int k = 0; k < n; ++k) {
            pi[k] = logistic(eta[k]);
            w[k] = std::max(pi[k] * (1.0 - pi[k]), kWeightFloor);
        }
        info = xa.transpose() * w.asDiagonal() * xa;
        const Eigen::MatrixXd t = solve_with_jitter(info, xa.transpose(), options.ridge);
        Eigen::VectorXd h(n);
        for (int k = 0; k < n; ++k) h[k] = w[k] * xa.row(k).dot(t.col(k));
        // Jeffreys-prior modified score for the all-success model
        const Eigen::VectorXd score =
            xa.transpose() *
            ((1.0 - pi.array()) + h.array() * (0.5 - pi.array())).matrix();
        const Eigen::VectorXd step = solve_with_jitter(info, score, options.ridge);
        theta += step;
        if (step.cwiseAbs().maxCoeff() < 1e-10) {
            out.converged = true;
            break;
        }
    }
    const Eigen::VectorXd eta = xa * theta;
    out.deviance = deviance_of(eta);
    const Eigen::MatrixXd v =
        solve_with_jitter(info, Eigen::MatrixXd::Identity(pa, pa), options.ridge);
    for (int i = 0; i < pa; ++i) {
        out.coefficients[active[i]] = theta[i];
        for (int j = 0; j < pa; ++j) out.covariance(active[i], active[j]) = v(i, j);
    }
    for (std::size_t b = 0; b < design.blocks.size(); ++b) {
        const TermBlock& block = design.blocks[b];
        for (int c = block.col0; c < block.col0 + block.ncols; ++c) {
            if (std::find(active.begin(), active.end(), c) != active.end()) out.edf[b] += 1.0;
        }
    }
    return out;
}

SmoothCurve predict_smooth(const FitResult& fit, const DifferenceDesign& design,
                           const std::string& term, const std::vector<double>& grid) {
    const TermBlock& block = design.block(term);
    SmoothCurve curve;
    curve.grid = grid;
    curve.fit.resize(static_cast<Eigen::Index>(grid.size()));
    curve.se.resize(static_cast<Eigen::Index>(grid.size()));
    curve.extrapolated.resize(grid.size());
    const Eigen::VectorXd theta = fit.coefficients.segment(block.col0, block.ncols);
    const Eigen::MatrixXd v = fit.covariance.block(block.col0, block.col0,
                                                   block.ncols, block.ncols);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXd row = block.basis.eval(grid[i]);
        curve.fit[static_cast<Eigen::Index>(i)] = row.dot(theta);
        curve.se[static_cast<Eigen::Index>(i)] = std::sqrt(std::max(0.0, row.dot(v * row)));
        curve.extrapolated[i] = !block.basis.in_range(grid[i]);
    }
    return curve;
}

Eigen::VectorXd observed_information_row(const FitResult& fit,
                                         const DifferenceDesign& design, int row) {
    const double eta = design.rows.row(row).dot(fit.coefficients);
    const double pi = logistic(eta);
    return pi * (1.0 - pi) * design.rows.row(row).array().square().matrix().transpose();
}

}  // namespace rem
