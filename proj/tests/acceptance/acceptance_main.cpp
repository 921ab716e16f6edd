// End-to-end acceptance gate: ten criteria, one PASS/FAIL line each, nonzero
// exit when any criterion fails. Tolerances are pinned next to each check.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rem/baseline.hpp"
#include "rem/config.hpp"
#include "rem/design.hpp"
#include "rem/fitter.hpp"
#include "rem/fixture.hpp"
#include "rem/fullik.hpp"
#include "rem/pipeline.hpp"
#include "rem/simulator.hpp"
#include "rem/studies.hpp"
#include "rem/timeshift.hpp"

#include "../test_util.hpp"

using namespace rem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// ---------------------------------------------------------------- criterion 1

struct Tiny {
    ShiftedCaseControlSet ccs;
    EventSequence seq = EventSequence::empty(3);
    Eigen::VectorXd attrs;
};

Tiny make_tiny(std::uint64_t seed, int n) {
    Tiny inst;
    Rng attr_rng(seed, 1);
    inst.attrs.resize(3);
    for (int i = 0; i < 3; ++i) inst.attrs[i] = attr_rng.normal(5.0, 1.0);

    CovariateCatalog catalog;
    catalog.set_node_attr("x", inst.attrs);
    IntensitySpec spec;
    spec.global_time_effect = [](double t) { return 0.5 * t; };
    spec.linear_terms = {{CovariateRef{CovariateRef::Kind::NodeSender, "x"}, 0.3}};
    TauLeapConfig cfg;
    cfg.node_count = 3;
    cfg.target_events = n;
    cfg.rng_seed = seed;
    cfg.rng_stream = 2;
    inst.seq = simulate_tau_leap(spec, catalog, cfg);

    Rng rng(seed, 3);
    const std::vector<Dyad> dyads = policy_dyads(RiskPolicy::NoSelfLoops, 3);
    const ShiftAssignment shifts =
        draw_shifts(dyads, 3, 1.0, inst.seq.mean_event_time(), rng);
    const EventSequence shifted = shift_process(inst.seq, shifts);
    inst.ccs = sample_case_control(shifted, shifts, inst.seq, rng);
    return inst;
}

// the sampled partial likelihood computed straight from covariate values; the
// design-matrix and IRLS machinery never enter this oracle
double raw_pl(const Tiny& inst, const Eigen::VectorXd& theta) {
    const auto rep_before = [&](const Dyad& d, double t) {
        for (const Event& e : inst.seq.events()) {
            if (e.time >= t) break;
            if (e.dyad == d) return 1.0;
        }
        return 0.0;
    };
    double ll = 0.0;
    for (const CaseControlRow& row : inst.ccs.rows) {
        const double eta_e = theta[0] * row.event_time +
                             theta[1] * inst.attrs[row.event_dyad.sender] +
                             theta[2] * rep_before(row.event_dyad, row.event_time);
        const double eta_c = theta[0] * row.control_time +
                             theta[1] * inst.attrs[row.control_dyad.sender] +
                             theta[2] * rep_before(row.control_dyad, row.control_time);
        const double m = std::max(eta_e, eta_c);
        ll += eta_e - (m + std::log(std::exp(eta_e - m) + std::exp(eta_c - m)));
    }
    return ll;
}

std::vector<TermSpec> tiny_terms() {
    std::vector<TermSpec> terms(3);
    terms[0].name = "g0";
    terms[0].covariate = CovariateRef{CovariateRef::Kind::Time, ""};
    terms[0].kind = BasisKind::Linear;
    terms[1].name = "x_s";
    terms[1].covariate = CovariateRef{CovariateRef::Kind::NodeSender, "x"};
    terms[1].kind = BasisKind::Linear;
    terms[2].name = "rep";
    terms[2].covariate = CovariateRef{CovariateRef::Kind::RepetitionIndicator, ""};
    terms[2].kind = BasisKind::Linear;
    return terms;
}

Outcome criterion1_oracle() {
    const auto start = std::chrono::steady_clock::now();
    int checked = 0;
    double worst = 0.0;
    CovariateCatalog catalog;
    for (std::uint64_t seed = 201; seed < 260 && checked < 20; ++seed) {
        const Tiny inst = make_tiny(seed, 50 + static_cast<int>(seed % 3) * 25);
        catalog.set_node_attr("x", inst.attrs);
        const DifferenceDesign design =
            assemble_difference_design(inst.ccs, catalog, inst.seq, tiny_terms());
        const FitResult fit = fit_degenerate_logistic(design, {0.0, 0.0, 0.0});
        if (!fit.converged || fit.separation ||
            fit.coefficients.cwiseAbs().maxCoeff() > 8.0) {
            continue;  // quasi-separated draw: the optimum sits at infinity
        }
        const auto pl = [&](const Eigen::VectorXd& th) { return raw_pl(inst, th); };
        const Eigen::VectorXd oracle = test_util::fd_newton_polish(
            pl, test_util::nelder_mead_max(pl, Eigen::VectorXd::Zero(3)));
        worst = std::max(worst, (fit.coefficients - oracle).cwiseAbs().maxCoeff());
        ++checked;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Outcome out;
    out.ok = checked >= 20 && worst < 1e-6 && secs < 60.0;
    std::ostringstream msg;
    msg << checked << " instances, worst |theta_fit - theta_oracle| = " << worst
        << ", " << secs << " s";
    out.detail = msg.str();
    return out;
}

// ------------------------------------------------------- criteria 2 through 5

RunConfig study_base() {
    return parse_config(R"({
      "scenario": "synthetic",
      "smoothing": {"folds": 5, "sweeps": 1, "seed": 3}
    })");
}

std::vector<ReplicationMetrics> replicate(const RunConfig& base, int p, int n,
                                          double nu, int reps) {
    std::vector<ReplicationMetrics> out;
    out.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        out.push_back(run_synthetic_replication(base, p, n, nu,
                                                static_cast<std::uint64_t>(r)));
    }
    return out;
}

std::vector<double> pull(const std::vector<ReplicationMetrics>& ms,
                         double ReplicationMetrics::*field) {
    std::vector<double> v;
    for (const ReplicationMetrics& m : ms) v.push_back(m.*field);
    return v;
}

Outcome criterion2_recovery() {
    const RunConfig base = study_base();
    const std::vector<ReplicationMetrics> reps = replicate(base, 15, 3000, 1.0, 100);
    const struct {
        double ReplicationMetrics::*field;
        double truth;
        const char* name;
    } targets[] = {{&ReplicationMetrics::beta1, 0.5, "beta1"},
                   {&ReplicationMetrics::beta2, -1.0, "beta2"},
                   {&ReplicationMetrics::beta_rep, 1.5, "beta_rep"},
                   {&ReplicationMetrics::beta0, -0.7, "beta0"}};
    Outcome out;
    std::ostringstream msg;
    for (const auto& t : targets) {
        const std::vector<double> v = pull(reps, t.field);
        const double mean = test_util::mean_of(v);
        const double se = test_util::sd_of(v) / std::sqrt(static_cast<double>(v.size()));
        const double z = std::abs(mean - t.truth) / se;
        if (z >= 3.0) out.ok = false;
        msg << t.name << " mean " << mean << " (|z| = " << z << ")  ";
    }
    out.detail = msg.str();
    return out;
}

Outcome criterion3_sample_size() {
    const RunConfig base = study_base();
    std::vector<double> l2_medians, beta0_iqrs;
    for (int n : {1000, 3000, 9000}) {
        const std::vector<ReplicationMetrics> reps = replicate(base, 15, n, 1.0, 50);
        l2_medians.push_back(test_util::median_of(pull(reps, &ReplicationMetrics::l2_g0)));
        beta0_iqrs.push_back(test_util::iqr_of(pull(reps, &ReplicationMetrics::beta0)));
    }
    Outcome out;
    out.ok = l2_medians[0] > l2_medians[1] && l2_medians[1] > l2_medians[2] &&
             beta0_iqrs[0] > beta0_iqrs[1] && beta0_iqrs[1] > beta0_iqrs[2];
    std::ostringstream msg;
    msg << "median L2(g0) " << l2_medians[0] << " > " << l2_medians[1] << " > "
        << l2_medians[2] << "; IQR(beta0) " << beta0_iqrs[0] << " > " << beta0_iqrs[1]
        << " > " << beta0_iqrs[2];
    out.detail = msg.str();
    return out;
}

Outcome criterion4_node_count() {
    const RunConfig base = study_base();
    std::vector<double> iqrs;
    for (int p : {5, 15, 45}) {
        const std::vector<ReplicationMetrics> reps = replicate(base, p, 3000, 1.0, 50);
        iqrs.push_back(test_util::iqr_of(pull(reps, &ReplicationMetrics::beta0)));
    }
    const double lo = *std::min_element(iqrs.begin(), iqrs.end());
    const double hi = *std::max_element(iqrs.begin(), iqrs.end());
    Outcome out;
    out.ok = hi < 1.5 * lo;  // "changes by less than 50% between any two p"
    std::ostringstream msg;
    msg << "IQR(beta0) over p in {5,15,45}: " << iqrs[0] << ", " << iqrs[1] << ", "
        << iqrs[2] << " (max/min = " << hi / lo << ")";
    out.detail = msg.str();
    return out;
}

Outcome criterion5_shift_size() {
    const RunConfig base = study_base();
    std::vector<double> err_medians, dropped_medians;
    for (double nu : {0.001, 1.0, 1000.0}) {
        const std::vector<ReplicationMetrics> reps = replicate(base, 15, 3000, nu, 50);
        std::vector<double> errs;
        for (const ReplicationMetrics& m : reps) errs.push_back(std::abs(m.beta0 + 0.7));
        err_medians.push_back(test_util::median_of(errs));
        dropped_medians.push_back(
            test_util::median_of(pull(reps, &ReplicationMetrics::dropped_fraction)));
    }
    Outcome out;
    out.ok = err_medians[1] < err_medians[0] && err_medians[1] < err_medians[2] &&
             dropped_medians[2] > 0.5;
    std::ostringstream msg;
    msg << "median |beta0 error| at nu {0.001,1,1000}: " << err_medians[0] << ", "
        << err_medians[1] << ", " << err_medians[2] << "; dropped at nu=1000: "
        << dropped_medians[2];
    out.detail = msg.str();
    return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion6_fullik_bias() {
    CompareConfig cfg;
    cfg.sample_sizes = {100, 500, 2000};
    cfg.replications = 500;
    cfg.node_count = 5;
    cfg.weibull_shape = 0.1;
    cfg.seed = 20;
    cfg.methods = {CompareMethod::ShiftedPL, CompareMethod::ShiftedPLFirth,
                   CompareMethod::FullLik};
    const std::vector<CompareCell> cells = compare_bias(cfg);
    const auto cell = [&](CompareMethod m, int n) -> const CompareCell& {
        for (const CompareCell& c : cells) {
            if (c.method == m && c.n == n) return c;
        }
        throw std::runtime_error("missing compare cell");
    };
    const double truth = -0.9;
    Outcome out;
    std::ostringstream msg;
    for (int n : cfg.sample_sizes) {
        const double spread_full = test_util::sd_of(cell(CompareMethod::FullLik, n).estimates);
        const double spread_pl = test_util::sd_of(cell(CompareMethod::ShiftedPL, n).estimates);
        if (spread_full >= spread_pl) out.ok = false;
        msg << "n=" << n << " sd full " << spread_full << " vs PL " << spread_pl << "; ";
    }
    const CompareCell& full2000 = cell(CompareMethod::FullLik, 2000);
    const CompareCell& firth2000 = cell(CompareMethod::ShiftedPLFirth, 2000);
    const double bias_full = std::abs(full2000.mean - truth);
    const double bias_firth = std::abs(firth2000.mean - truth);
    const double se_firth = test_util::sd_of(firth2000.estimates) /
                            std::sqrt(static_cast<double>(firth2000.estimates.size()));
    if (!(bias_full > bias_firth)) out.ok = false;
    if (!(bias_firth < 3.0 * se_firth)) out.ok = false;
    msg << "|bias| full " << bias_full << " vs PL+Firth " << bias_firth
        << " (3 se = " << 3.0 * se_firth << ")";
    out.detail = msg.str();
    return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion7_lambda0() {
    Outcome out;
    std::ostringstream msg;
    CovariateCatalog catalog;
    for (double lambda0 : {0.5, 1.0, 2.0}) {
        IntensitySpec spec;
        spec.lambda0 = lambda0;
        TauLeapConfig cfg;
        cfg.node_count = 3;
        cfg.target_events = 5000;
        cfg.rng_seed = 7;
        cfg.rng_stream = static_cast<std::uint64_t>(lambda0 * 10.0);
        const EventSequence seq = simulate_tau_leap(spec, catalog, cfg);
        const BreslowCurve curve = breslow_cumulative(
            seq, RiskPolicy::NoSelfLoops, [](const Dyad&, double) { return 0.0; });
        const Lambda0Estimate est = estimate_lambda0(curve);
        if (std::abs(est.slope - lambda0) >= 0.1 * lambda0) out.ok = false;
        msg << "lambda0 " << lambda0 << " -> " << est.slope << "; ";
    }
    out.detail = msg.str();
    return out;
}

// ---------------------------------------------------------------- criterion 8

DifferenceDesign single_column(const std::vector<double>& diffs) {
    DifferenceDesign d;
    d.rows.resize(static_cast<int>(diffs.size()), 1);
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        d.rows(static_cast<int>(i), 0) = diffs[i];
    }
    TermBlock block;
    block.name = "x";
    block.col0 = 0;
    block.ncols = 1;
    block.penalized = false;
    std::vector<double> sample = diffs;
    sample.push_back(0.0);
    sample.push_back(1.0);
    block.basis = BasisSpec::build(BasisKind::Linear, 1, sample);
    block.event_values = diffs;
    block.control_values.assign(diffs.size(), 0.0);
    d.blocks.push_back(std::move(block));
    return d;
}

Outcome criterion8_information() {
    const Tiny inst = make_tiny(811, 70);
    CovariateCatalog catalog;
    catalog.set_node_attr("x", inst.attrs);
    const DifferenceDesign design =
        assemble_difference_design(inst.ccs, catalog, inst.seq, tiny_terms());
    const FitResult fit = fit_degenerate_logistic(design, {0.0, 0.0, 0.0});

    Eigen::VectorXd total = Eigen::VectorXd::Zero(design.cols());
    for (int i = 0; i < design.n(); ++i) {
        total += observed_information_row(fit, design, i);
    }
    // five-point stencil: truncation O(h^4) keeps the combined FD error below
    // the 1e-6 relative target
    const double h = 1e-2;
    double worst_rel = 0.0;
    for (int j = 0; j < design.cols(); ++j) {
        const auto at = [&](double step) {
            Eigen::VectorXd th = fit.coefficients;
            th[j] += step;
            return degenerate_loglik(design, th);
        };
        const double hess_jj = -(-at(2.0 * h) + 16.0 * at(h) - 30.0 * at(0.0) +
                                 16.0 * at(-h) - at(-2.0 * h)) /
                               (12.0 * h * h);
        worst_rel = std::max(worst_rel, std::abs(total[j] - hess_jj) / std::abs(hess_jj));
    }

    // a structural-zero row contributes exactly nothing
    const DifferenceDesign zero = single_column({0.0, 1.0});
    FitResult at_zero;
    at_zero.coefficients = Eigen::VectorXd::Zero(1);
    const bool zero_exact = observed_information_row(at_zero, zero, 0)[0] == 0.0;

    Outcome out;
    out.ok = worst_rel < 1e-6 && zero_exact;
    std::ostringstream msg;
    msg << "worst relative FD mismatch " << worst_rel << "; structural-zero row "
        << (zero_exact ? "exactly zero" : "NONZERO");
    out.detail = msg.str();
    return out;
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion9_invariants() {
    Outcome out;
    std::ostringstream msg;
    CovariateCatalog catalog;

    // (a) shifting preserves per-run event counts
    bool counts_ok = true;
    for (std::uint64_t seed : {301, 302, 303, 304, 305}) {
        const Tiny inst = make_tiny(seed, 60);
        Rng rng(seed, 5);
        const std::vector<Dyad> dyads = policy_dyads(RiskPolicy::NoSelfLoops, 3);
        const ShiftAssignment shifts =
            draw_shifts(dyads, 3, 1.0, inst.seq.mean_event_time(), rng);
        const EventSequence shifted = shift_process(inst.seq, shifts);
        counts_ok = counts_ok && shifted.size() == inst.seq.size();
    }

    // (b) swapping event and control in every row negates the design rows and
    // the estimate
    bool anti_ok = true;
    for (std::uint64_t seed : {311, 312, 313}) {
        const Tiny inst = make_tiny(seed, 60);
        catalog.set_node_attr("x", inst.attrs);
        const DifferenceDesign design =
            assemble_difference_design(inst.ccs, catalog, inst.seq, tiny_terms());
        ShiftedCaseControlSet swapped = inst.ccs;
        for (CaseControlRow& row : swapped.rows) {
            std::swap(row.event_dyad, row.control_dyad);
            std::swap(row.event_time, row.control_time);
        }
        const DifferenceDesign neg =
            assemble_difference_design(swapped, catalog, inst.seq, tiny_terms());
        anti_ok = anti_ok && (design.rows + neg.rows).cwiseAbs().maxCoeff() < 1e-12;
        const FitResult fit = fit_degenerate_logistic(design, {0.0, 0.0, 0.0});
        const FitResult nfit = fit_degenerate_logistic(neg, {0.0, 0.0, 0.0});
        anti_ok = anti_ok &&
                  (fit.coefficients + nfit.coefficients).cwiseAbs().maxCoeff() < 1e-8;
    }

    // (c) lambda0-scale invariance: doubling the time scale of a homogeneous
    // sequence is exactly a baseline-rate change, and every time-independent
    // coefficient is unchanged
    bool scale_ok = true;
    for (std::uint64_t seed : {321, 322, 323}) {
        const Tiny inst = make_tiny(seed, 60);
        catalog.set_node_attr("x", inst.attrs);
        Rng rng(seed, 6);
        const std::vector<Dyad> dyads = policy_dyads(RiskPolicy::NoSelfLoops, 3);
        const ShiftAssignment shifts =
            draw_shifts(dyads, 3, 1.0, inst.seq.mean_event_time(), rng);

        std::vector<Event> scaled_events = inst.seq.events();
        for (Event& e : scaled_events) e.time *= 2.0;
        const EventSequence scaled(std::move(scaled_events), inst.seq.horizon() * 2.0, 3);
        std::vector<double> scaled_shift_values;
        for (const Dyad& d : shifts.dyads()) {
            scaled_shift_values.push_back(shifts.shift(d) * 2.0);
        }
        const ShiftAssignment scaled_shifts(shifts.dyads(), scaled_shift_values, 3, 1.0,
                                            shifts.mean_event_time() * 2.0);

        Rng rng_a(seed, 7), rng_b(seed, 7);
        const ShiftedCaseControlSet ccs_a =
            sample_case_control(shift_process(inst.seq, shifts), shifts, inst.seq, rng_a);
        const ShiftedCaseControlSet ccs_b = sample_case_control(
            shift_process(scaled, scaled_shifts), scaled_shifts, scaled, rng_b);

        std::vector<TermSpec> terms = tiny_terms();
        terms.erase(terms.begin());  // keep only the time-independent effects
        const DifferenceDesign da = assemble_difference_design(ccs_a, catalog, inst.seq, terms);
        const DifferenceDesign db = assemble_difference_design(ccs_b, catalog, scaled, terms);
        const FitResult fa = fit_degenerate_logistic(da, {0.0, 0.0});
        const FitResult fb = fit_degenerate_logistic(db, {0.0, 0.0});
        scale_ok = scale_ok && da.rows.rows() == db.rows.rows() &&
                   (fa.coefficients - fb.coefficients).cwiseAbs().maxCoeff() < 1e-10;
    }

    // (d) every emitted smooth centers to mean zero on its construction sample
    bool center_ok = true;
    double worst_center = 0.0;
    {
        const Tiny inst = make_tiny(331, 250);
        catalog.set_node_attr("x", inst.attrs);
        std::vector<TermSpec> terms = tiny_terms();
        terms[0].kind = BasisKind::PSpline;
        terms[0].rank = 8;
        const DifferenceDesign design =
            assemble_difference_design(inst.ccs, catalog, inst.seq, terms);
        const FitResult fit = fit_degenerate_logistic(design, {1.0, 0.0, 0.0});
        for (const TermBlock& block : design.blocks) {
            if (!block.penalized) continue;
            std::vector<double> sample = block.event_values;
            sample.insert(sample.end(), block.control_values.begin(),
                          block.control_values.end());
            const SmoothCurve curve = predict_smooth(fit, design, block.name, sample);
            worst_center = std::max(worst_center, std::abs(curve.fit.mean()));
        }
        center_ok = worst_center < 1e-8;
    }

    out.ok = counts_ok && anti_ok && scale_ok && center_ok;
    msg << "counts " << (counts_ok ? "ok" : "FAIL") << "; antisymmetry "
        << (anti_ok ? "ok" : "FAIL") << "; lambda0 scale "
        << (scale_ok ? "ok" : "FAIL") << "; smooth centering |mean| " << worst_center;
    out.detail = msg.str();
    return out;
}

// --------------------------------------------------------------- criterion 10

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion10_bike() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "rem_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    const FixturePaths paths =
        generate_bike_fixture((root / "fixture").string(), 5000, 2023);
    const RunConfig cfg = bike_fixture_config(paths, 2023);
    cmd_fit(cfg, (root / "run1").string());
    cmd_fit(cfg, (root / "run2").string());

    // bit-identical rerun
    bool identical = true;
    int files = 0;
    for (const auto& entry : fs::directory_iterator(root / "run1")) {
        ++files;
        identical = identical &&
                    slurp(entry.path()) == slurp(root / "run2" / entry.path().filename());
    }

    // seven smooths plus the two competition coefficients with finite SEs
    int smooths = 0, linears = 0;
    bool se_ok = true;
    {
        std::ifstream in(root / "run1" / "fit_summary.csv");
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.find(",smooth,") != std::string::npos) ++smooths;
            if (line.find("competition_") == 0) {
                ++linears;
                std::stringstream ss(line);
                std::string term, type, est, se;
                std::getline(ss, term, ',');
                std::getline(ss, type, ',');
                std::getline(ss, est, ',');
                std::getline(ss, se, ',');
                se_ok = se_ok && std::stod(se) > 0.0 && std::isfinite(std::stod(est));
            }
        }
    }
    const bool curves_present = [&] {
        for (const char* name :
             {"smooth_g0.csv", "smooth_temperature.csv", "smooth_precipitation.csv",
              "smooth_time_of_day.csv", "smooth_distance.csv", "smooth_repetition.csv",
              "smooth_reciprocity.csv"}) {
            if (!fs::exists(root / "run1" / name)) return false;
        }
        return true;
    }();

    // fitted cyclic time-of-day smooth against the planted bimodal curve
    std::vector<double> gx, gy;
    {
        std::ifstream in(root / "run1" / "smooth_time_of_day.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::stringstream ss(line);
            std::string x, f;
            std::getline(ss, x, ',');
            std::getline(ss, f, ',');
            gx.push_back(std::stod(x));
            gy.push_back(std::stod(f));
        }
    }
    const auto interp = [&](double x) {
        const auto it = std::lower_bound(gx.begin(), gx.end(), x);
        if (it == gx.begin()) return gy.front();
        if (it == gx.end()) return gy.back();
        const std::size_t i = static_cast<std::size_t>(it - gx.begin());
        const double w = (x - gx[i - 1]) / (gx[i] - gx[i - 1]);
        return (1.0 - w) * gy[i - 1] + w * gy[i];
    };
    std::vector<double> fitted;
    for (double h : paths.tod_grid) fitted.push_back(interp(h));
    const double mf = test_util::mean_of(fitted);
    const double mp = test_util::mean_of(paths.tod_planted);
    double sff = 0.0, spp = 0.0, sfp = 0.0;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        const double a = fitted[i] - mf, b = paths.tod_planted[i] - mp;
        sff += a * a;
        spp += b * b;
        sfp += a * b;
    }
    const double corr = sfp / std::sqrt(sff * spp);

    Outcome out;
    out.ok = identical && files > 0 && smooths == 7 && linears == 2 && se_ok &&
             curves_present && corr > 0.8;
    std::ostringstream msg;
    msg << files << " files " << (identical ? "bit-identical" : "DIFFER") << "; "
        << smooths << " smooths, " << linears
        << " competition coefficients; planted time-of-day correlation " << corr;
    out.detail = msg.str();
    return out;
}

}  // namespace

int main() {
    struct Entry {
        const char* title;
        Outcome (*run)();
    };
    const Entry entries[] = {
        {"oracle equivalence", criterion1_oracle},
        {"coefficient recovery", criterion2_recovery},
        {"sample-size trend", criterion3_sample_size},
        {"node-count insensitivity", criterion4_node_count},
        {"shift-size U-shape", criterion5_shift_size},
        {"full-likelihood bias", criterion6_fullik_bias},
        {"lambda0 recovery", criterion7_lambda0},
        {"information identity", criterion8_information},
        {"invariant suites", criterion9_invariants},
        {"bike pipeline smoke test", criterion10_bike},
    };
    bool all_ok = true;
    for (std::size_t i = 0; i < std::size(entries); ++i) {
        Outcome out;
        try {
            out = entries[i].run();
        } catch (const std::exception& e) {
            out.ok = false;
            out.detail = std::string("exception: ") + e.what();
        }
        all_ok = all_ok && out.ok;
        std::printf("%s criterion %zu: %s — %s\n", out.ok ? "PASS" : "FAIL", i + 1,
                    entries[i].title, out.detail.c_str());
        std::fflush(stdout);
    }
    return all_ok ? 0 : 1;
}
