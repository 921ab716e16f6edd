#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "rem/fixture.hpp"
#include "rem/pipeline.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out_dir = "out";
    std::int64_t seed = -1;
    int workers = 0;
};

void add_common(CLI::App* sub, CommonArgs& args, bool config_required) {
    auto* opt = sub->add_option("--config", args.config, "run configuration (JSON)");
    if (config_required) opt->required();
    sub->add_option("--out-dir", args.out_dir, "output directory");
    sub->add_option("--seed", args.seed, "override the configured seed");
    sub->add_option("--workers", args.workers, "override the configured worker count");
}

rem::RunConfig load(const CommonArgs& args) {
    rem::RunConfig cfg = rem::load_config(args.config);
    if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
    if (args.workers > 0) {
        cfg.study.workers = args.workers;
        cfg.compare.workers = args.workers;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-shifted relational event model pipeline"};
    app.require_subcommand(1);

    CommonArgs sim_args, shift_args, fit_args, base_args, cmp_args, study_args;
    auto* sim = app.add_subcommand("simulate", "simulate a scenario to an events CSV");
    add_common(sim, sim_args, true);
    auto* shift = app.add_subcommand(
        "shift", "simulate, shift and sample case-control pairs");
    add_common(shift, shift_args, true);
    auto* fit = app.add_subcommand("fit", "fit the additive model");
    add_common(fit, fit_args, true);
    auto* base = app.add_subcommand("baseline", "fit plus Breslow baseline recovery");
    add_common(base, base_args, true);
    auto* cmp = app.add_subcommand("compare-fullik",
                                   "bias comparison against the full likelihood");
    add_common(cmp, cmp_args, true);
    auto* study = app.add_subcommand("study", "replication sweep over n, p or nu");
    add_common(study, study_args, true);

    std::string fix_dir = "fixture";
    int fix_rows = 5000;
    std::int64_t fix_seed = 2023;
    auto* fix = app.add_subcommand("fixture", "generate the synthetic ride fixture");
    fix->add_option("--out-dir", fix_dir, "fixture directory");
    fix->add_option("--rows", fix_rows, "number of rides");
    fix->add_option("--seed", fix_seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            rem::cmd_simulate(load(sim_args), sim_args.out_dir);
        } else if (shift->parsed()) {
            rem::cmd_shift(load(shift_args), shift_args.out_dir);
        } else if (fit->parsed()) {
            rem::cmd_fit(load(fit_args), fit_args.out_dir);
        } else if (base->parsed()) {
            rem::cmd_baseline(load(base_args), base_args.out_dir);
        } else if (cmp->parsed()) {
            rem::cmd_compare(load(cmp_args), cmp_args.out_dir);
        } else if (study->parsed()) {
            rem::cmd_study(load(study_args), study_args.out_dir);
        } else if (fix->parsed()) {
            rem::generate_bike_fixture(fix_dir, fix_rows,
                                       static_cast<std::uint64_t>(fix_seed));
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
