#include "rem/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rem/fullik.hpp"
#include "rem/studies.hpp"

namespace rem {

using nlohmann::json;

namespace {

// stream sub-channels so one (seed, replication) pair feeds independent draws
constexpr std::uint64_t kAttrChannel = 1;
constexpr std::uint64_t kSimChannel = 2;
constexpr std::uint64_t kShiftChannel = 3;

std::uint64_t channel(std::uint64_t stream, std::uint64_t tag) {
    return stream * 8 + tag;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file: " + path);
    return out;
}

// Everything a rerun needs: config digest, seeds, versions, input digests.
// No wall-clock entries, so identical runs produce identical manifests.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const RunConfig& cfg,
                    const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& output_names) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["config_digest"] = fnv1a_hex(cfg.raw_text);
    m["seed"] = cfg.seed;
    m["stream"] = cfg.stream;
    m["nu"] = cfg.nu;
    m["scenario"] = cfg.scenario;
    json inputs = json::object();
    for (const std::string& p : input_paths) inputs[p] = file_digest_hex(p);
    m["inputs"] = inputs;
    json outputs = json::object();
    for (const std::string& name : output_names) {
        outputs[name] = file_digest_hex(join(out_dir, name));
    }
    m["outputs"] = outputs;
    auto out = open_out(join(out_dir, "manifest.json"));
    out << m.dump(2) << '\n';
}

void write_shifts_csv(const ShiftAssignment& shifts, const std::string& path) {
    auto out = open_out(path);
    out << "sender,receiver,shift\n";
    for (const Dyad& d : shifts.dyads()) {
        out << d.sender << ',' << d.receiver << ',' << fmt(shifts.shift(d)) << '\n';
    }
}

void write_fit_summary(const FitArtifacts& art, const std::string& path) {
    auto out = open_out(path);
    out << "term,type,estimate,se,edf,lambda\n";
    for (std::size_t b = 0; b < art.design.blocks.size(); ++b) {
        const TermBlock& block = art.design.blocks[b];
        if (block.penalized) {
            out << block.name << ",smooth,,," << fmt(art.fit.edf[b]) << ','
                << fmt(art.fit.smoothing_params[b]) << '\n';
        } else {
            const double est = art.fit.coefficients[block.col0];
            const double se = std::sqrt(
                std::max(0.0, art.fit.covariance(block.col0, block.col0)));
            out << block.name << ",linear," << fmt(est) << ',' << fmt(se) << ','
                << fmt(art.fit.edf[b]) << ",0\n";
        }
    }
}

void write_smooth_curves(const FitArtifacts& art, const std::string& out_dir,
                         std::vector<std::string>& outputs) {
    for (const TermBlock& block : art.design.blocks) {
        if (!block.penalized) continue;
        const bool cyclic = block.basis.kind() == BasisKind::CyclicPSpline;
        const double lo = cyclic ? 0.0 : block.basis.data_min();
        const double hi = cyclic ? block.basis.period() : block.basis.data_max();
        const int m = 200;
        std::vector<double> grid(m);
        for (int i = 0; i < m; ++i) {
            grid[i] = lo + (hi - lo) * i / static_cast<double>(m - 1);
        }
        const SmoothCurve curve = predict_smooth(art.fit, art.design, block.name, grid);
        const std::string name = "smooth_" + block.name + ".csv";
        auto out = open_out(join(out_dir, name));
        out << "x,fit,se,extrapolated\n";
        for (int i = 0; i < m; ++i) {
            out << fmt(curve.grid[i]) << ',' << fmt(curve.fit[i]) << ','
                << fmt(curve.se[i]) << ',' << (curve.extrapolated[i] ? 1 : 0) << '\n';
        }
        outputs.push_back(name);
    }
}

}  // namespace

Scenario build_synthetic_scenario(const RunConfig& cfg, Rng& attr_rng) {
    Scenario sc;
    Eigen::VectorXd x(cfg.nodes);
    for (int i = 0; i < cfg.nodes; ++i) x[i] = attr_rng.normal(5.0, 1.0);
    sc.catalog.set_node_attr("x", x);
    const WaveConfig w = cfg.wave;
    sc.catalog.set_global("x", [w](double t) {
        double phase = t - w.period * std::floor(t / w.period);
        // left-continuous: the high level holds over (0, duty*period]
        if (phase == 0.0 && t > 0.0) phase = w.period;
        return phase <= w.duty * w.period ? w.high : w.low;
    });

    sc.spec.lambda0 = cfg.truth.lambda0;
    sc.spec.risk = cfg.risk;
    sc.spec.linear_terms = {
        {CovariateRef{CovariateRef::Kind::NodeSender, "x"}, cfg.truth.beta1},
        {CovariateRef{CovariateRef::Kind::DyadicAbsDiff, "x"}, cfg.truth.beta2},
        {CovariateRef{CovariateRef::Kind::RepetitionIndicator, ""}, cfg.truth.beta_rep},
        {CovariateRef{CovariateRef::Kind::Global, "x"}, cfg.truth.beta0},
    };
    sc.spec.global_time_effect = [](double t) { return t; };
    return sc;
}

EventSequence simulate_scenario(const RunConfig& cfg, const Scenario* scenario) {
    if (cfg.scenario == "weibull") {
        return simulate_weibull(cfg.nodes, cfg.events, cfg.compare.shape, cfg.seed,
                                cfg.stream);
    }
    if (!scenario) throw ConfigError("simulate_scenario: synthetic scenario required");
    TauLeapConfig leap;
    leap.tau = cfg.tau;
    leap.target_events = cfg.events;
    leap.rng_seed = cfg.seed;
    leap.rng_stream = channel(cfg.stream, kSimChannel);
    leap.node_count = cfg.nodes;
    return simulate_tau_leap(scenario->spec, scenario->catalog, leap);
}

FitArtifacts fit_pipeline(const EventSequence& seq, const CovariateCatalog& catalog,
                          const std::vector<TermSpec>& terms, double nu,
                          std::uint64_t seed, std::uint64_t stream,
                          const SmoothingConfig& smoothing, RiskPolicy risk) {
    FitArtifacts art;
    art.terms = terms;
    Rng rng(seed, channel(stream, kShiftChannel));
    const std::vector<Dyad> dyads = policy_dyads(risk, seq.node_count());
    art.shifts = draw_shifts(dyads, seq.node_count(), nu, seq.mean_event_time(), rng);
    const EventSequence shifted = shift_process(seq, art.shifts);
    art.ccs = sample_case_control(shifted, art.shifts, seq, rng);
    if (art.ccs.rows.empty()) {
        throw ConfigError("empty case-control set: all " +
                          std::to_string(art.ccs.dropped_uninformative) +
                          " of " + std::to_string(art.ccs.total_events) +
                          " events were dropped as uninformative");
    }
    art.design = assemble_difference_design(art.ccs, catalog, seq, terms);
    if (art.design.penalized_count() > 0) {
        SmoothingPolicy policy;
        policy.grid = smoothing.grid;
        policy.folds = smoothing.folds;
        policy.sweeps = smoothing.sweeps;
        policy.seed = smoothing.seed;
        art.fit = fit_additive(art.design, policy);
    } else {
        art.fit = fit_degenerate_logistic(
            art.design, std::vector<double>(art.design.blocks.size(), 0.0));
    }
    return art;
}

double g0_l2_distance(const FitResult& fit, const DifferenceDesign& design,
                      const std::string& term,
                      const std::function<double(double)>& g0_true, double t_max) {
    const int m = 512;
    std::vector<double> grid(m);
    for (int i = 0; i < m; ++i) grid[i] = t_max * i / static_cast<double>(m - 1);
    const SmoothCurve curve = predict_smooth(fit, design, term, grid);
    double mean_fit = 0.0, mean_true = 0.0;
    std::vector<double> truth(m);
    for (int i = 0; i < m; ++i) {
        truth[i] = g0_true(grid[i]);
        mean_fit += curve.fit[i];
        mean_true += truth[i];
    }
    mean_fit /= m;
    mean_true /= m;
    double integral = 0.0;
    const double h = t_max / (m - 1);
    for (int i = 0; i + 1 < m; ++i) {
        const double a = (curve.fit[i] - mean_fit) - (truth[i] - mean_true);
        const double b = (curve.fit[i + 1] - mean_fit) - (truth[i + 1] - mean_true);
        integral += 0.5 * h * (a * a + b * b);
    }
    // normalized by the window length so horizons of different runs compare
    return std::sqrt(integral / t_max);
}

ObservationalData load_observational(const RunConfig& cfg) {
    if (cfg.data.events.empty()) throw ConfigError("observational run: data.events not set");
    ObservationalData obs;
    EventCsvOptions opts;
    opts.window_start = cfg.data.window_start;
    opts.window_end = cfg.data.window_end;
    obs.events = read_events(cfg.data.events, opts, obs.stations, obs.report);
    obs.catalog.set_time_of_day_origin(hours_of_day(obs.report.origin_epoch));
    if (!cfg.data.temperature.empty()) {
        obs.catalog.set_global("temperature",
                               read_global_series(cfg.data.temperature,
                                                  ValueTransform::None,
                                                  obs.report.origin_epoch,
                                                  cfg.data.max_gap_seconds));
    }
    if (!cfg.data.precipitation.empty()) {
        obs.catalog.set_global("precipitation",
                               read_global_series(cfg.data.precipitation,
                                                  ValueTransform::None,
                                                  obs.report.origin_epoch,
                                                  cfg.data.max_gap_seconds));
    }
    if (!cfg.data.distances.empty()) {
        const Eigen::MatrixXd dist = read_distance_matrix(cfg.data.distances, obs.stations);
        // the station universe can grow while reading distances; pad
        const int p = obs.stations.size();
        Eigen::MatrixXd full =
            Eigen::MatrixXd::Constant(p, p, std::numeric_limits<double>::quiet_NaN());
        full.topLeftCorner(dist.rows(), dist.cols()) = dist;
        obs.catalog.set_dyadic_attr("distance", full);
        obs.catalog.set_node_attr("competition", competition(full));
    }
    obs.medians = estimate_medians(obs.events);
    return obs;
}

void cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    EventSequence seq;
    std::vector<std::string> outputs{"events.csv"};
    if (cfg.scenario == "synthetic") {
        Rng attr_rng(cfg.seed, channel(cfg.stream, kAttrChannel));
        const Scenario sc = build_synthetic_scenario(cfg, attr_rng);
        seq = simulate_scenario(cfg, &sc);
        auto out = open_out(join(out_dir, "node_attrs.csv"));
        out << "node,x\n";
        const Eigen::VectorXd& x = sc.catalog.node_attr("x");
        for (int i = 0; i < cfg.nodes; ++i) out << i << ',' << fmt(x[i]) << '\n';
        outputs.push_back("node_attrs.csv");
    } else if (cfg.scenario == "weibull") {
        seq = simulate_scenario(cfg, nullptr);
    } else {
        throw ConfigError("simulate: scenario '" + cfg.scenario + "' is not simulable");
    }
    write_events_csv(seq, join(out_dir, "events.csv"));
    write_manifest(out_dir, "simulate", cfg, {}, outputs);
}

void cmd_shift(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    Rng attr_rng(cfg.seed, channel(cfg.stream, kAttrChannel));
    const Scenario sc = build_synthetic_scenario(cfg, attr_rng);
    const EventSequence seq = simulate_scenario(cfg, &sc);
    Rng rng(cfg.seed, channel(cfg.stream, kShiftChannel));
    const std::vector<Dyad> dyads = policy_dyads(cfg.risk, seq.node_count());
    const ShiftAssignment shifts =
        draw_shifts(dyads, seq.node_count(), cfg.nu, seq.mean_event_time(), rng);
    const EventSequence shifted = shift_process(seq, shifts);
    const ShiftedCaseControlSet ccs =
        sample_case_control(shifted, shifts, seq, rng);
    write_events_csv(seq, join(out_dir, "events.csv"));
    write_events_csv(shifted, join(out_dir, "shifted_events.csv"));
    write_shifts_csv(shifts, join(out_dir, "shifts.csv"));
    write_case_control_csv(ccs, join(out_dir, "case_control.csv"));
    write_manifest(out_dir, "shift", cfg, {},
                   {"events.csv", "shifted_events.csv", "shifts.csv",
                    "case_control.csv"});
}

namespace {

void run_fit(const RunConfig& cfg, const std::string& out_dir, bool with_baseline) {
    ensure_dir(out_dir);
    std::vector<std::string> inputs;
    std::vector<std::string> outputs{"fit_summary.csv"};

    EventSequence seq;
    CovariateCatalog catalog;
    std::vector<TermSpec> terms = cfg.terms;
    if (cfg.scenario == "observational") {
        ObservationalData obs = load_observational(cfg);
        seq = std::move(obs.events);
        catalog = std::move(obs.catalog);
        if (terms.empty()) {
            terms = observational_terms(obs.medians.m_rep.value_or(1.0),
                                        obs.medians.m_rec.value_or(1.0));
        }
        for (const std::string& p :
             {cfg.data.events, cfg.data.temperature, cfg.data.precipitation,
              cfg.data.distances}) {
            if (!p.empty()) inputs.push_back(p);
        }
    } else if (cfg.scenario == "synthetic") {
        Rng attr_rng(cfg.seed, channel(cfg.stream, kAttrChannel));
        Scenario sc = build_synthetic_scenario(cfg, attr_rng);
        seq = simulate_scenario(cfg, &sc);
        catalog = std::move(sc.catalog);
        if (terms.empty()) terms = synthetic_terms();
    } else {
        throw ConfigError("fit: scenario '" + cfg.scenario + "' has no model");
    }

    const FitArtifacts art = fit_pipeline(seq, catalog, terms, cfg.nu, cfg.seed,
                                          cfg.stream, cfg.smoothing, cfg.risk);
    write_fit_summary(art, join(out_dir, "fit_summary.csv"));
    write_smooth_curves(art, out_dir, outputs);

    if (with_baseline) {
        const FittedPredictor pred(art.fit, art.design, art.terms, catalog, seq);
        const BreslowCurve curve = breslow_cumulative(
            seq, cfg.risk, [&pred](const Dyad& d, double t) { return pred.eta(d, t); });
        const Lambda0Estimate lam = estimate_lambda0(curve);
        {
            auto out = open_out(join(out_dir, "breslow.csv"));
            out << "time,cumulative\n";
            for (std::size_t i = 0; i < curve.times.size(); ++i) {
                out << fmt(curve.times[i]) << ',' << fmt(curve.values[i]) << '\n';
            }
        }
        {
            auto out = open_out(join(out_dir, "lambda0.csv"));
            out << "slope,se\n" << fmt(lam.slope) << ',' << fmt(lam.se) << '\n';
        }
        outputs.push_back("breslow.csv");
        outputs.push_back("lambda0.csv");
    }
    write_manifest(out_dir, with_baseline ? "baseline" : "fit", cfg, inputs, outputs);
}

}  // namespace

void cmd_fit(const RunConfig& cfg, const std::string& out_dir) {
    run_fit(cfg, out_dir, false);
}

void cmd_baseline(const RunConfig& cfg, const std::string& out_dir) {
    run_fit(cfg, out_dir, true);
}

void cmd_compare(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    CompareConfig cc;
    cc.sample_sizes = cfg.compare.sample_sizes;
    cc.replications = cfg.compare.replications;
    cc.node_count = cfg.nodes;
    cc.weibull_shape = cfg.compare.shape;
    cc.nu = cfg.nu;
    cc.seed = cfg.seed;
    cc.workers = cfg.compare.workers;
    const std::vector<CompareCell> cells = compare_bias(cc);
    auto out = open_out(join(out_dir, "compare.csv"));
    out << "method,n,mean,q025,q975,mean_runtime_seconds\n";
    for (const CompareCell& cell : cells) {
        out << to_string(cell.method) << ',' << cell.n << ',' << fmt(cell.mean) << ','
            << fmt(cell.q025) << ',' << fmt(cell.q975) << ','
            << fmt(cell.mean_runtime_seconds) << '\n';
    }
    write_manifest(out_dir, "compare-fullik", cfg, {}, {"compare.csv"});
}

void cmd_study(const RunConfig& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const std::vector<StudySummaryRow> rows = run_study_sweep(cfg);
    auto out = open_out(join(out_dir, "study.csv"));
    out << "sweep,value,metric,mean,q25,q50,q75,failures\n";
    for (const StudySummaryRow& r : rows) {
        out << cfg.study.sweep << ',' << fmt(r.value) << ',' << r.metric << ','
            << fmt(r.mean) << ',' << fmt(r.q25) << ',' << fmt(r.q50) << ','
            << fmt(r.q75) << ',' << r.failures << '\n';
    }
    write_manifest(out_dir, "study", cfg, {}, {"study.csv"});
}

}  // namespace rem
