#include <doctest.h>

#include <cmath>
#include <vector>

#include "rem/fullik.hpp"
#include "rem/rng.hpp"
#include "rem/simulator.hpp"

#include "test_util.hpp"

using namespace rem;

TEST_CASE("homogeneous single-dyad fit equals the closed-form rate n / T") {
    Rng rng(70, 0);
    EventSequence seq = EventSequence::empty(1);
    double t = 0.0;
    const int n = 400;
    for (int i = 0; i < n; ++i) {
        t += rng.exponential(0.5);
        seq.append(Event{t, Dyad{0, 0}});
    }
    seq.set_horizon(t);
    CovariateCatalog catalog;
    const FullLikFit fit =
        fit_piecewise_full_likelihood(seq, catalog, {}, RiskPolicy::AllPairs);
    REQUIRE(fit.converged);
    // total exposure is exactly t_n for the single always-at-risk dyad
    CHECK(std::exp(fit.coefficients[0]) ==
          doctest::Approx(n / seq.events().back().time).epsilon(1e-8));
    CHECK(fit.se[0] == doctest::Approx(1.0 / std::sqrt(n)).epsilon(1e-6));
}

TEST_CASE("piecewise approximation is exact for constant group hazards") {
    // two dyads with a binary covariate; Poisson MLE per group is closed form
    Rng rng(71, 0);
    EventSequence seq = EventSequence::empty(2);
    double t = 0.0;
    int n1 = 0, n0 = 0;
    for (int i = 0; i < 300; ++i) {
        t += rng.exponential(1.0 / 3.0);  // total rate 1 + 2
        if (rng.uniform() < 2.0 / 3.0) {
            seq.append(Event{t, Dyad{1, 0}});
            ++n1;
        } else {
            seq.append(Event{t, Dyad{0, 1}});
            ++n0;
        }
    }
    seq.set_horizon(t);
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
    z(1, 0) = 1.0;
    CovariateCatalog catalog;
    catalog.set_dyadic_attr("z", z);
    const std::vector<CovariateRef> terms{CovariateRef{CovariateRef::Kind::Dyadic, "z"}};
    const FullLikFit fit =
        fit_piecewise_full_likelihood(seq, catalog, terms, RiskPolicy::NoSelfLoops);
    REQUIRE(fit.converged);
    const double exposure = seq.events().back().time;  // equal for both dyads
    CHECK(fit.coefficients[0] ==
          doctest::Approx(std::log(n0 / exposure)).epsilon(1e-8));
    CHECK(fit.coefficients[1] ==
          doctest::Approx(std::log(static_cast<double>(n1) / n0)).epsilon(1e-8));
}

TEST_CASE("weibull log-time slope is recovered up to its known bias") {
    const EventSequence seq = simulate_weibull(5, 2000, 0.1, 72, 0);
    CovariateCatalog catalog;
    const std::vector<CovariateRef> terms{
        CovariateRef{CovariateRef::Kind::Time, "", ValueTransform::Log}};
    const FullLikFit fit =
        fit_piecewise_full_likelihood(seq, catalog, terms, RiskPolicy::AllPairs);
    REQUIRE(fit.converged);
    CHECK(std::abs(fit.coefficients[1] - (-0.9)) < 0.05);

    SUBCASE("the Firth variant stays close to the unadjusted fit") {
        const FullLikFit firth = fit_piecewise_full_likelihood(
            seq, catalog, terms, RiskPolicy::AllPairs, true, true);
        REQUIRE(firth.converged);
        CHECK(std::abs(firth.coefficients[1] - fit.coefficients[1]) < 0.05);
    }
}

TEST_CASE("one replication collapses the bounds onto the point estimate") {
    CompareConfig cfg;
    cfg.sample_sizes = {100};
    cfg.replications = 1;
    cfg.seed = 73;
    const std::vector<CompareCell> cells = compare_bias(cfg);
    REQUIRE(cells.size() == 4);
    for (const CompareCell& c : cells) {
        REQUIRE(c.estimates.size() == 1);
        CHECK(c.mean == c.estimates[0]);
        CHECK(c.q025 == c.estimates[0]);
        CHECK(c.q975 == c.estimates[0]);
    }
}

TEST_CASE("desk-scale comparison reproduces the variance/bias ordering") {
    CompareConfig cfg;
    cfg.sample_sizes = {100, 500};
    cfg.replications = 60;
    cfg.seed = 74;
    cfg.methods = {CompareMethod::ShiftedPL, CompareMethod::FullLik};
    const std::vector<CompareCell> cells = compare_bias(cfg);
    REQUIRE(cells.size() == 4);
    for (int i = 0; i < 2; ++i) {
        const CompareCell& shifted = cells[2 * i];
        const CompareCell& full = cells[2 * i + 1];
        REQUIRE(shifted.method == CompareMethod::ShiftedPL);
        REQUIRE(full.method == CompareMethod::FullLik);
        CHECK(full.q975 - full.q025 < shifted.q975 - shifted.q025);
    }
}

TEST_CASE("comparison is deterministic under a fixed seed") {
    CompareConfig cfg;
    cfg.sample_sizes = {100};
    cfg.replications = 5;
    cfg.seed = 75;
    const std::vector<CompareCell> a = compare_bias(cfg);
    const std::vector<CompareCell> b = compare_bias(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int r = 0; r < cfg.replications; ++r) {
            CHECK(a[i].estimates[r] == b[i].estimates[r]);
        }
    }
}
