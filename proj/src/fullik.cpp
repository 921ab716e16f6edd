#include "rem/fullik.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "rem/design.hpp"
#include "rem/fitter.hpp"
#include "rem/simulator.hpp"
#include "rem/timeshift.hpp"

namespace rem {

FullLikFit fit_piecewise_full_likelihood(const EventSequence& seq,
                                         const CovariateCatalog& catalog,
                                         const std::vector<CovariateRef>& terms,
                                         RiskPolicy policy, bool include_intercept,
                                         bool firth) {
    const std::vector<Dyad> dyads = policy_dyads(policy, seq.node_count());
    const int d = static_cast<int>(dyads.size());
    const int p = static_cast<int>(terms.size()) + (include_intercept ? 1 : 0);
    const int n = static_cast<int>(seq.size());
    if (n == 0) throw ConfigError("fit_piecewise_full_likelihood: no events");

    FullLikFit fit;

    // one Poisson pseudo-row per (event interval, at-risk dyad) with offset
    // log(t_i - t_{i-1}); y = 1 for the occurring dyad
    std::vector<Eigen::MatrixXd> xrows(n);  // d x p covariates at t_i
    Eigen::VectorXd log_dt(n);
    std::vector<int> event_row(n);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        const Event& e = seq.events()[i];
        const double dt = e.time - prev;
        prev = e.time;
        if (!(dt > 0.0)) {
            ++fit.excluded_intervals;
            log_dt[i] = -std::numeric_limits<double>::infinity();
        } else {
            log_dt[i] = std::log(dt);
        }
        Eigen::MatrixXd rows(d, p);
        for (int j = 0; j < d; ++j) {
            int c = 0;
            if (include_intercept) rows(j, c++) = 1.0;
            for (const CovariateRef& ref : terms) {
                rows(j, c++) = eval_covariate(ref, catalog, seq, dyads[j], e.time);
            }
            if (dyads[j] == e.dyad) event_row[i] = j;
        }
        xrows[i] = std::move(rows);
    }

    const auto loglik = [&](const Eigen::VectorXd& beta) {
        double ll = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(log_dt[i])) continue;
            const Eigen::VectorXd eta = xrows[i] * beta;
            ll += eta[event_row[i]];
            for (int j = 0; j < d; ++j) {
                const double a = eta[j] + log_dt[i];
                if (a > 700.0) return -std::numeric_limits<double>::infinity();
                ll -= std::exp(a);
            }
        }
        return ll;
    };

    const auto information_at = [&](const Eigen::VectorXd& beta) {
        Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(log_dt[i])) continue;
            const Eigen::VectorXd eta = xrows[i] * beta;
            Eigen::VectorXd m(d);
            for (int j = 0; j < d; ++j) m[j] = std::exp(std::min(700.0, eta[j] + log_dt[i]));
            info += xrows[i].transpose() * m.asDiagonal() * xrows[i];
        }
        return info;
    };

    // Firth target: log-likelihood plus half the log-determinant of the
    // expected information (Jeffreys penalty)
    const auto penalized_loglik = [&](const Eigen::VectorXd& beta) {
        const double ll = loglik(beta);
        if (!std::isfinite(ll)) return ll;
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(information_at(beta));
        double logdet = 0.0;
        for (int j = 0; j < p; ++j) {
            const double v = ldlt.vectorD()[j];
            if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
            logdet += std::log(v);
        }
        return ll + 0.5 * logdet;
    };
    const auto objective = [&](const Eigen::VectorXd& beta) {
        return firth ? penalized_loglik(beta) : loglik(beta);
    };

    // start at the homogeneous-rate solution so the first exponentials are sane
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    if (include_intercept) {
        beta[0] = std::log(static_cast<double>(n) / (d * seq.horizon()));
    }
    double ll = objective(beta);

    Eigen::MatrixXd hess(p, p);
    for (int it = 1; it <= 200; ++it) {
        fit.iterations = it;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
        hess.setZero();
        // leverage accumulation for the bias-reduced score needs two passes
        std::vector<Eigen::VectorXd> mu(n);
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(log_dt[i])) continue;
            const Eigen::VectorXd eta = xrows[i] * beta;
            Eigen::VectorXd m(d);
            for (int j = 0; j < d; ++j) m[j] = std::exp(std::min(700.0, eta[j] + log_dt[i]));
            mu[i] = m;
            grad += xrows[i].row(event_row[i]).transpose();
            grad -= xrows[i].transpose() * m;
            hess += xrows[i].transpose() * m.asDiagonal() * xrows[i];
        }
        if (firth) {
            const Eigen::MatrixXd hinv =
                hess.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
            for (int i = 0; i < n; ++i) {
                if (!std::isfinite(log_dt[i])) continue;
                for (int j = 0; j < d; ++j) {
                    const Eigen::VectorXd x = xrows[i].row(j).transpose();
                    const double h = mu[i][j] * x.dot(hinv * x);
                    grad += 0.5 * h * x;
                }
            }
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
        if (ldlt.info() != Eigen::Success) {
            hess.diagonal().array() += 1e-10;
            ldlt.compute(hess);
        }
        const Eigen::VectorXd step = ldlt.solve(grad);
        double s = 1.0;
        Eigen::VectorXd beta_new = beta + step;
        double ll_new = objective(beta_new);
        for (int h = 0; h < 40 && !(ll_new >= ll - 1e-12); ++h) {
            s *= 0.5;
            beta_new = beta + s * step;
            ll_new = objective(beta_new);
        }
        const double change = step.cwiseAbs().maxCoeff() * s;
        beta = beta_new;
        ll = ll_new;
        if (change < 1e-10) {
            fit.converged = true;
            break;
        }
    }
    fit.coefficients = beta;
    const Eigen::MatrixXd cov = hess.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    fit.se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    return fit;
}

std::string to_string(CompareMethod m) {
    switch (m) {
        case CompareMethod::ShiftedPL: return "shifted-PL";
        case CompareMethod::ShiftedPLFirth: return "shifted-PL+Firth";
        case CompareMethod::FullLik: return "full-likelihood";
        case CompareMethod::FullLikFirth: return "full-likelihood+Firth";
    }
    return "?";
}

namespace {

double quantile_of(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return lo + 1 < v.size() ? (1.0 - frac) * v[lo] + frac * v[lo + 1] : v.back();
}

// slope of the log-time covariate estimated via the shifted case-control path
double shifted_pl_estimate(const EventSequence& seq, double nu, std::uint64_t seed,
                           std::uint64_t stream, bool firth) {
    CovariateCatalog catalog;
    Rng rng(seed, stream);
    const std::vector<Dyad> dyads = policy_dyads(RiskPolicy::AllPairs, seq.node_count());
    const ShiftAssignment shifts =
        draw_shifts(dyads, seq.node_count(), nu, seq.mean_event_time(), rng);
    const EventSequence shifted = shift_process(seq, shifts);
    const ShiftedCaseControlSet ccs =
        sample_case_control(shifted, shifts, seq, rng);
    if (ccs.rows.empty()) throw ConfigError("shifted_pl_estimate: all rows dropped");
    TermSpec term;
    term.name = "log_time";
    term.covariate = CovariateRef{CovariateRef::Kind::Time, "", ValueTransform::Log};
    term.kind = BasisKind::Linear;
    const DifferenceDesign design =
        assemble_difference_design(ccs, catalog, seq, {term});
    const FitResult fit = firth ? firth_adjust(design)
                                : fit_degenerate_logistic(design, {0.0});
    return fit.coefficients[0];
}

double full_lik_estimate(const EventSequence& seq, bool firth) {
    CovariateCatalog catalog;
    const std::vector<CovariateRef> terms{
        CovariateRef{CovariateRef::Kind::Time, "", ValueTransform::Log}};
    const FullLikFit fit = fit_piecewise_full_likelihood(
        seq, catalog, terms, RiskPolicy::AllPairs, true, firth);
    return fit.coefficients[1];
}

}  // namespace

std::vector<CompareCell> compare_bias(const CompareConfig& cfg) {
    std::vector<CompareCell> cells;
    for (int n : cfg.sample_sizes) {
        for (CompareMethod m : cfg.methods) {
            CompareCell cell;
            cell.method = m;
            cell.n = n;
            cell.estimates.resize(cfg.replications);
            cells.push_back(std::move(cell));
        }
    }

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        CompareCell& cell = cells[ci];
        const auto t0 = std::chrono::steady_clock::now();
        const auto run_rep = [&](int r) {
            // byte-identical simulated data across methods: stream = replication
            const EventSequence seq =
                simulate_weibull(cfg.node_count, cell.n, cfg.weibull_shape,
                                 cfg.seed, static_cast<std::uint64_t>(r));
            switch (cell.method) {
                case CompareMethod::ShiftedPL:
                    return shifted_pl_estimate(seq, cfg.nu, cfg.seed + 1,
                                               static_cast<std::uint64_t>(r), false);
                case CompareMethod::ShiftedPLFirth:
                    return shifted_pl_estimate(seq, cfg.nu, cfg.seed + 1,
                                               static_cast<std::uint64_t>(r), true);
                case CompareMethod::FullLik:
                    return full_lik_estimate(seq, false);
                case CompareMethod::FullLikFirth:
                    return full_lik_estimate(seq, true);
            }
            return 0.0;
        };
        if (cfg.workers > 1) {
            std::vector<std::thread> pool;
            std::atomic<int> next{0};
            for (int w = 0; w < cfg.workers; ++w) {
                pool.emplace_back([&] {
                    for (int r = next++; r < cfg.replications; r = next++) {
                        cell.estimates[r] = run_rep(r);
                    }
                });
            }
            for (auto& th : pool) th.join();
        } else {
            for (int r = 0; r < cfg.replications; ++r) cell.estimates[r] = run_rep(r);
        }
        const auto t1 = std::chrono::steady_clock::now();
        cell.mean_runtime_seconds =
            std::chrono::duration<double>(t1 - t0).count() / cfg.replications;
        double mean = 0.0;
        for (double e : cell.estimates) mean += e;
        cell.mean = mean / cfg.replications;
        cell.q025 = quantile_of(cell.estimates, 0.025);
        cell.q975 = quantile_of(cell.estimates, 0.975);
    }
    return cells;
}

}  // namespace rem
