#include <doctest.h>

#include <cmath>
#include <vector>

#include "rem/baseline.hpp"
#include "rem/rng.hpp"
#include "rem/simulator.hpp"

#include "test_util.hpp"

using namespace rem;

namespace {

const auto zero_eta = [](const Dyad&, double) { return 0.0; };

}  // namespace

TEST_CASE("single dyad, single event, no covariates: one unit jump") {
    std::vector<Event> ev{{2.0, {0, 0}}};
    const EventSequence seq(std::move(ev), 5.0, 1);
    const BreslowCurve curve = breslow_cumulative(seq, RiskPolicy::AllPairs, zero_eta);
    REQUIRE(curve.times.size() == 1);
    CHECK(curve.times[0] == doctest::Approx(2.0));
    CHECK(curve.values[0] == doctest::Approx(1.0));
}

TEST_CASE("homogeneous process recovers its rate") {
    IntensitySpec spec;
    spec.lambda0 = 2.0;
    spec.risk = RiskPolicy::NoSelfLoops;
    CovariateCatalog catalog;
    TauLeapConfig cfg;
    cfg.node_count = 3;
    cfg.target_events = 5000;
    cfg.rng_seed = 60;
    const EventSequence seq = simulate_tau_leap(spec, catalog, cfg);
    const BreslowCurve curve = breslow_cumulative(seq, RiskPolicy::NoSelfLoops, zero_eta);
    const Lambda0Estimate est = estimate_lambda0(curve);
    CHECK(std::abs(est.slope - 2.0) / 2.0 < 0.05);
}

TEST_CASE("adding log 2 to every predictor halves the estimator exactly") {
    Rng rng(61, 0);
    EventSequence seq = EventSequence::empty(3);
    double t = 0.0;
    for (int i = 0; i < 50; ++i) {
        t += rng.exponential(0.2);
        const int s = static_cast<int>(rng.uniform_int(3));
        seq.append(Event{t, Dyad{s, (s + 1) % 3}});
    }
    seq.set_horizon(t);
    const auto eta = [](const Dyad& d, double tt) {
        return 0.1 * d.sender + 0.05 * std::sin(tt);
    };
    const auto eta2 = [&](const Dyad& d, double tt) { return eta(d, tt) + std::log(2.0); };
    const BreslowCurve a = breslow_cumulative(seq, RiskPolicy::NoSelfLoops, eta);
    const BreslowCurve b = breslow_cumulative(seq, RiskPolicy::NoSelfLoops, eta2);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        CHECK(b.values[i] * 2.0 == doctest::Approx(a.values[i]).epsilon(1e-12));
    }
    SUBCASE("the curve is non-decreasing") {
        for (std::size_t i = 1; i < a.values.size(); ++i) {
            CHECK(a.values[i] >= a.values[i - 1]);
        }
    }
}

TEST_CASE("exact linear Breslow values give back the exact slope") {
    BreslowCurve curve;
    const double lambda0 = 0.37;
    for (int i = 1; i <= 20; ++i) {
        curve.times.push_back(0.5 * i);
        curve.values.push_back(lambda0 * 0.5 * i);
    }
    const Lambda0Estimate est = estimate_lambda0(curve);
    CHECK(est.slope == doctest::Approx(lambda0).epsilon(1e-12));
    CHECK(est.se == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("degenerate regressions are rejected") {
    BreslowCurve one;
    one.times = {1.0};
    one.values = {0.5};
    CHECK_THROWS(estimate_lambda0(one));
}

TEST_CASE("zero-mean noise leaves the slope unbiased") {
    const double lambda0 = 1.3;
    std::vector<double> slopes;
    Rng rng(62, 0);
    for (int r = 0; r < 1000; ++r) {
        BreslowCurve curve;
        for (int i = 1; i <= 30; ++i) {
            const double t = 0.2 * i;
            curve.times.push_back(t);
            curve.values.push_back(lambda0 * t + rng.normal(0.0, 0.05));
        }
        slopes.push_back(estimate_lambda0(curve).slope);
    }
    const double se = test_util::sd_of(slopes) / std::sqrt(1000.0);
    CHECK(std::abs(test_util::mean_of(slopes) - lambda0) < 3.0 * se);
}

TEST_CASE("scaling the true rate scales the estimated slope") {
    CovariateCatalog catalog;
    const auto slope_for = [&](double lambda0) {
        IntensitySpec spec;
        spec.lambda0 = lambda0;
        spec.risk = RiskPolicy::NoSelfLoops;
        TauLeapConfig cfg;
        cfg.node_count = 3;
        cfg.target_events = 4000;
        cfg.rng_seed = 63;
        const EventSequence seq = simulate_tau_leap(spec, catalog, cfg);
        return estimate_lambda0(
                   breslow_cumulative(seq, RiskPolicy::NoSelfLoops, zero_eta))
            .slope;
    };
    const double s1 = slope_for(0.5);
    const double s2 = slope_for(1.0);
    CHECK(s2 / s1 == doctest::Approx(2.0).epsilon(0.1));
}
