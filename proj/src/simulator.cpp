#include "rem/simulator.hpp"

#include <Eigen/Core>
#include <cmath>

namespace rem {

namespace {

struct TermSplit {
    // indices into spec.linear_terms / spec.smooth_terms
    std::vector<int> global_linear, global_smooth;
    std::vector<int> static_linear, static_smooth;
    std::vector<int> dynamic_linear, dynamic_smooth;  // endogenous or time-varying dyadic
};

TermSplit split_terms(const IntensitySpec& spec) {
    TermSplit out;
    for (int i = 0; i < static_cast<int>(spec.linear_terms.size()); ++i) {
        const auto k = spec.linear_terms[i].first.kind;
        if (!is_dyadic_kind(k)) out.global_linear.push_back(i);
        else if (!is_endogenous_kind(k)) out.static_linear.push_back(i);
        else out.dynamic_linear.push_back(i);
    }
    for (int i = 0; i < static_cast<int>(spec.smooth_terms.size()); ++i) {
        const auto k = spec.smooth_terms[i].first.kind;
        if (!is_dyadic_kind(k)) out.global_smooth.push_back(i);
        else if (!is_endogenous_kind(k)) out.static_smooth.push_back(i);
        else out.dynamic_smooth.push_back(i);
    }
    return out;
}

}  // namespace

EventSequence simulate_tau_leap(const IntensitySpec& spec, const CovariateCatalog& catalog,
                                const TauLeapConfig& cfg) {
    if (cfg.target_events < 1) throw ConfigError("simulate_tau_leap: target_events >= 1");
    if (!(spec.lambda0 > 0.0)) throw ConfigError("simulate_tau_leap: lambda0 must be > 0");

    const int p = cfg.node_count;
    const std::vector<Dyad> dyads = policy_dyads(spec.risk, p);
    if (dyads.empty()) throw ConfigError("simulate_tau_leap: empty risk set");
    const int d = static_cast<int>(dyads.size());

    const TermSplit split = split_terms(spec);
    EventSequence history = EventSequence::empty(p);
    Rng rng(cfg.rng_seed, cfg.rng_stream);

    // static exogenous contribution, cached once per dyad
    Eigen::VectorXd static_part(d);
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int i : split.static_linear) {
            const auto& [ref, coef] = spec.linear_terms[i];
            s += coef * eval_covariate(ref, catalog, history, dyads[j], 0.0);
        }
        for (int i : split.static_smooth) {
            const auto& [ref, fn] = spec.smooth_terms[i];
            s += fn(eval_covariate(ref, catalog, history, dyads[j], 0.0));
        }
        static_part[j] = s;
    }

    const auto global_exponent = [&](double t) {
        double a = 0.0;
        for (int i : split.global_linear) {
            const auto& [ref, coef] = spec.linear_terms[i];
            a += coef * eval_covariate(ref, catalog, history, Dyad{0, 0}, t);
        }
        for (int i : split.global_smooth) {
            const auto& [ref, fn] = spec.smooth_terms[i];
            a += fn(eval_covariate(ref, catalog, history, Dyad{0, 0}, t));
        }
        if (spec.global_time_effect) a += spec.global_time_effect(t);
        return a;
    };

    const auto dynamic_exponent = [&](int j, double t) {
        double s = 0.0;
        for (int i : split.dynamic_linear) {
            const auto& [ref, coef] = spec.linear_terms[i];
            s += coef * eval_covariate(ref, catalog, history, dyads[j], t);
        }
        for (int i : split.dynamic_smooth) {
            const auto& [ref, fn] = spec.smooth_terms[i];
            s += fn(eval_covariate(ref, catalog, history, dyads[j], t));
        }
        return s;
    };
    const bool has_dynamic = !split.dynamic_linear.empty() || !split.dynamic_smooth.empty();

    Eigen::VectorXd weights(d);
    double total_rate = 0.0;
    const auto anchor = [&](double t) {
        const double a = global_exponent(t);
        for (int j = 0; j < d; ++j) {
            const double e = static_part[j] + (has_dynamic ? dynamic_exponent(j, t) : 0.0);
            weights[j] = std::exp(a + e);
        }
        total_rate = spec.lambda0 * weights.sum();
        if (!std::isfinite(total_rate)) {
            throw NumericError("simulate_tau_leap: non-finite total rate at t=" +
                               std::to_string(t));
        }
    };

    double t = 0.0;
    anchor(t);
    if (total_rate <= 0.0) throw DegenerateProcessError("total rate is zero at t=0");

    // rough horizon guess n / R(0), refined on the fly so the relative rate
    // change across one leap stays below 10%
    double tau = cfg.tau > 0.0 ? cfg.tau
                               : cfg.target_events / total_rate / (10.0 * cfg.target_events);
    const bool adapt = cfg.tau <= 0.0;
    double leap_end = t + tau;
    double frozen_rate = total_rate;

    while (static_cast<int>(history.size()) < cfg.target_events) {
        if (frozen_rate <= 0.0) {
            throw DegenerateProcessError("total rate reached zero at t=" + std::to_string(t));
        }
        const double wait = rng.exponential(1.0 / frozen_rate);
        if (t + wait > leap_end) {
            t = leap_end;
            if (cfg.max_time && t > *cfg.max_time) {
                history.set_horizon(*cfg.max_time);
                throw TruncationError(
                    "simulate_tau_leap: max_time reached with " +
                        std::to_string(history.size()) + " of " +
                        std::to_string(cfg.target_events) + " events",
                    history);
            }
            const double old_rate = frozen_rate;
            anchor(t);
            if (adapt && old_rate > 0.0) {
                const double rel = std::abs(total_rate - old_rate) / old_rate;
                if (rel > 0.10) tau *= 0.5;
                else if (rel < 0.02) tau *= 1.3;
            }
            frozen_rate = total_rate;
            leap_end = t + tau;
            continue;
        }
        t += wait;
        if (cfg.max_time && t > *cfg.max_time) {
            history.set_horizon(*cfg.max_time);
            throw TruncationError(
                "simulate_tau_leap: max_time reached with " +
                    std::to_string(history.size()) + " of " +
                    std::to_string(cfg.target_events) + " events",
                history);
        }
        // multinomial draw over the at-risk dyads, frozen weights
        double u = rng.uniform() * weights.sum();
        int pick = d - 1;
        for (int j = 0; j < d; ++j) {
            u -= weights[j];
            if (u <= 0.0) {
                pick = j;
                break;
            }
        }
        double event_time = t;
        if (!history.events().empty() && event_time <= history.events().back().time) {
            event_time = std::nextafter(history.events().back().time,
                                        std::numeric_limits<double>::infinity());
        }
        history.append(Event{event_time, dyads[pick]});
        // re-anchor just past the event so the left-continuous endogenous
        // statistics see the event that was just appended
        anchor(std::nextafter(event_time, std::numeric_limits<double>::infinity()));
        frozen_rate = total_rate;
        leap_end = event_time + tau;
        t = event_time;
    }
    return history;
}

EventSequence simulate_weibull(int p, int n, double shape, std::uint64_t seed,
                               std::uint64_t stream) {
    if (shape <= 0.0) throw ConfigError("simulate_weibull: shape must be > 0");
    if (p < 1 || n < 1) throw ConfigError("simulate_weibull: need p >= 1 and n >= 1");
    Rng rng(seed, stream);
    const double d = static_cast<double>(p) * p;
    EventSequence seq = EventSequence::empty(p);
    // unit-rate arrivals mapped through the inverse cumulative rate
    // Lambda(t) = p^2 t^shape
    double gamma = 0.0;
    for (int k = 0; k < n; ++k) {
        gamma += rng.exponential(1.0);
        double time = std::pow(gamma / d, 1.0 / shape);
        if (!seq.events().empty() && time <= seq.events().back().time) {
            time = std::nextafter(seq.events().back().time,
                                  std::numeric_limits<double>::infinity());
        }
        const int idx = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(p) * p));
        seq.append(Event{time, dyad_from_index(idx, p)});
    }
    return seq;
}

}  // namespace rem
