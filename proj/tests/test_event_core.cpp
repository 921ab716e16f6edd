#include <doctest.h>

#include <cmath>
#include <vector>

#include "rem/covariates.hpp"
#include "rem/intensity.hpp"
#include "rem/types.hpp"

using namespace rem;

namespace {

EventSequence three_events(int p = 3) {
    std::vector<Event> ev{{1.0, {1, 2}}, {2.0, {1, 2}}, {3.0, {2, 1}}};
    return EventSequence(std::move(ev), 10.0, p);
}

}  // namespace

TEST_CASE("count_process basics") {
    const EventSequence empty = EventSequence::empty(3);
    CHECK(count_process(empty, {0, 1}, 5.0) == 0);

    const EventSequence seq = three_events();
    CHECK(count_process(seq, {1, 2}, 2.0) == 2);
    CHECK(count_process(seq, {2, 1}, 2.999) == 0);
    CHECK(count_process(seq, {2, 1}, 3.0) == 1);
}

TEST_CASE("count_process is a non-decreasing unit-jump step function") {
    const EventSequence seq = three_events();
    int prev = 0;
    for (double t = 0.0; t <= 10.0; t += 0.125) {
        const int c = count_process(seq, {1, 2}, t);
        CHECK(c >= prev);
        CHECK(c - prev <= 1);
        prev = c;
    }
    // jumps only at the dyad's event times
    CHECK(count_process(seq, {1, 2}, 1.0) - count_process(seq, {1, 2}, 0.999) == 1);
    CHECK(count_process(seq, {1, 2}, 2.5) - count_process(seq, {1, 2}, 2.0) == 0);
}

TEST_CASE("per-dyad counts at the horizon sum to n") {
    const EventSequence seq = three_events();
    int total = 0;
    for (const Dyad& d : policy_dyads(RiskPolicy::AllPairs, seq.node_count())) {
        total += count_process(seq, d, seq.horizon());
    }
    CHECK(total == static_cast<int>(seq.size()));
}

TEST_CASE("tie-breaking nudges later events and counts adjustments") {
    std::vector<Event> ev{{1.0, {0, 1}}, {1.0, {1, 0}}, {2.0, {0, 1}}};
    const EventSequence seq(std::move(ev), 5.0, 2);
    CHECK(seq.tie_adjustments() == 1);
    for (std::size_t i = 1; i < seq.size(); ++i) {
        CHECK(seq.events()[i].time > seq.events()[i - 1].time);
    }
    CHECK(seq.events()[1].time == doctest::Approx(1.0));
}

TEST_CASE("strictly-before queries exclude the event itself") {
    const EventSequence seq = three_events();
    CHECK(seq.count_before({1, 2}, 1.0) == 0);
    CHECK(seq.count_before({1, 2}, 1.0000001) == 1);
    CHECK(seq.last_before({1, 2}, 1.0) == doctest::Approx(-1.0));
    CHECK(seq.last_before({1, 2}, 2.5) == doctest::Approx(2.0));
}

TEST_CASE("eval_intensity with no covariates and g0(t)=t") {
    IntensitySpec spec;
    spec.lambda0 = 1.0;
    spec.global_time_effect = [](double t) { return t; };
    CovariateCatalog catalog;
    const EventSequence history = EventSequence::empty(4);
    CHECK(eval_intensity(spec, catalog, {1, 2}, 0.0, history) == doctest::Approx(1.0));
    CHECK(eval_intensity(spec, catalog, {1, 2}, 2.0, history) ==
          doctest::Approx(std::exp(2.0)));
}

TEST_CASE("four-term linear intensity matches a hand-computed exponent") {
    // beta1 = 0.5 on x_s, beta2 = -1 on |x_s - x_r|, beta_rep = 1.5,
    // beta0 = -0.7 on a constant global covariate, g0(t) = t
    IntensitySpec spec;
    spec.lambda0 = 1.0;
    spec.global_time_effect = [](double t) { return t; };
    spec.linear_terms = {
        {CovariateRef{CovariateRef::Kind::NodeSender, "x"}, 0.5},
        {CovariateRef{CovariateRef::Kind::DyadicAbsDiff, "x"}, -1.0},
        {CovariateRef{CovariateRef::Kind::RepetitionIndicator, ""}, 1.5},
        {CovariateRef{CovariateRef::Kind::Global, "x"}, -0.7},
    };
    CovariateCatalog catalog;
    Eigen::VectorXd attrs(4);
    attrs << 0.0, 5.0, 3.0, 0.0;  // sender 1 has x_s = 5, receiver 2 has x_r = 3
    catalog.set_node_attr("x", attrs);
    catalog.set_global("x", [](double) { return 1.0; });
    const EventSequence history = EventSequence::empty(4);

    const double expected = std::exp(0.1 + 0.5 * 5.0 - 1.0 * 2.0 + 1.5 * 0.0 - 0.7);
    CHECK(eval_intensity(spec, catalog, {1, 2}, 0.1, history) ==
          doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(std::exp(-0.1)).epsilon(1e-12));

    SUBCASE("permuting the term order leaves the value unchanged") {
        IntensitySpec permuted = spec;
        std::swap(permuted.linear_terms[0], permuted.linear_terms[3]);
        std::swap(permuted.linear_terms[1], permuted.linear_terms[2]);
        CHECK(eval_intensity(permuted, catalog, {1, 2}, 0.1, history) ==
              doctest::Approx(eval_intensity(spec, catalog, {1, 2}, 0.1, history))
                  .epsilon(1e-15));
    }

    SUBCASE("scaling lambda0 scales the intensity by exactly c") {
        IntensitySpec scaled = spec;
        scaled.lambda0 = 3.25;
        CHECK(eval_intensity(scaled, catalog, {1, 2}, 0.1, history) ==
              doctest::Approx(3.25 * eval_intensity(spec, catalog, {1, 2}, 0.1, history))
                  .epsilon(1e-15));
    }
}

TEST_CASE("self-loops are excluded under the no-self-loops policy") {
    IntensitySpec spec;
    spec.risk = RiskPolicy::NoSelfLoops;
    CovariateCatalog catalog;
    const EventSequence history = EventSequence::empty(5);
    CHECK(eval_intensity(spec, catalog, {3, 3}, 0.7, history) == 0.0);
    CHECK(!policy_admits(RiskPolicy::NoSelfLoops, {3, 3}));
    CHECK(policy_dyad_count(RiskPolicy::NoSelfLoops, 5) == 20);
    CHECK(policy_dyad_count(RiskPolicy::AllPairs, 5) == 25);
}

TEST_CASE("unknown covariate name raises a configuration error") {
    IntensitySpec spec;
    spec.linear_terms = {{CovariateRef{CovariateRef::Kind::Global, "missing"}, 1.0}};
    CovariateCatalog catalog;
    const EventSequence history = EventSequence::empty(3);
    CHECK_THROWS_AS(eval_intensity(spec, catalog, {0, 1}, 0.5, history), ConfigError);
}

TEST_CASE("step series are left-continuous") {
    const StepSeries s({0.0, 1.0, 2.0}, {10.0, 20.0, 30.0});
    CHECK(s.at(0.5) == 10.0);
    CHECK(s.at(1.0) == 10.0);  // query at a stamp returns the previous value
    CHECK(s.at(1.0001) == 20.0);
    CHECK(s.at(-5.0) == 10.0);
}

TEST_CASE("square wave: high over the first duty fraction, left-continuous") {
    const StepSeries w = square_wave(0.2, 0.0, 1.0, 0.5, 1.0);
    CHECK(w.at(0.05) == 1.0);
    CHECK(w.at(0.10) == 1.0);  // end of the high half still high
    CHECK(w.at(0.15) == 0.0);
    CHECK(w.at(0.20) == 0.0);  // end of the period still low
    CHECK(w.at(0.25) == 1.0);
    CHECK_THROWS_AS(square_wave(0.0, 0.0, 1.0, 0.5, 1.0), ConfigError);
}
