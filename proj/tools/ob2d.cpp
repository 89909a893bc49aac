// ob2d command line: run, sweep, twin, check.
#include "ob2d/checks.hpp"
#include "ob2d/config.hpp"
#include "ob2d/error.hpp"
#include "ob2d/experiments.hpp"
#include "ob2d/format.hpp"
#include "ob2d/simulation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

enum Exit { exit_ok = 0, exit_check_failed = 1, exit_config = 2, exit_blowup = 3, exit_io = 4 };

int status_exit(ob2d::StepStatus s) {
    return s == ob2d::StepStatus::ok ? exit_ok : exit_blowup;
}

int cmd_run(const std::string& config, const std::string& out, bool restart) {
    const ob2d::RunConfig cfg = ob2d::load_config(config);
    ob2d::RunOptions opts;
    opts.out_dir = out.empty() ? cfg.output.dir : out;
    opts.restart = restart;
    opts.keep_rows = false;
    const ob2d::RunOutcome r = ob2d::run_simulation(cfg, opts);
    if (r.cfl_warnings > 0)
        std::fprintf(stderr, "warning: %ld steps exceeded CFL target %g\n", r.cfl_warnings, cfg.stepper.cfl_target);
    std::printf("status %s, step %ld, t = %s, energy defect %.3e\n", ob2d::to_string(r.status), r.last_step,
                ob2d::short_number(r.final_time).c_str(), ob2d::energy_balance(r.energy));
    if (r.status != ob2d::StepStatus::ok) std::fprintf(stderr, "%s\n", r.message.c_str());
    return status_exit(r.status);
}

int cmd_sweep(const std::string& config, const std::string& axis, const std::vector<double>& values,
              const std::string& out, bool parallel) {
    ob2d::SweepSpec spec;
    spec.base = ob2d::load_config(config);
    spec.axis = ob2d::parse_axis(axis);
    spec.values = values;
    spec.out_dir = out;
    spec.parallel = parallel;
    const std::vector<ob2d::SweepRow> rows = ob2d::run_sweep(spec);
    for (const auto& r : rows) {
        std::printf("%s=%s: %s, step %ld, t = %s%s%s\n", axis.c_str(), ob2d::short_number(r.value).c_str(),
                    r.error.empty() ? ob2d::to_string(r.status) : "error", r.steps,
                    ob2d::short_number(r.final_time).c_str(), r.error.empty() ? "" : ": ", r.error.c_str());
    }
    return exit_ok;
}

int cmd_twin(const std::string& config, double delta, std::uint64_t seed, const std::string& out) {
    const ob2d::RunConfig cfg = ob2d::load_config(config);
    ob2d::TwinSpec spec;
    spec.delta = delta;
    spec.perturbation_seed = seed;
    const ob2d::TwinResult r = ob2d::run_twin(cfg, spec, out);
    std::printf("status %s, t = %s, |V| = %.6e, |W| = %.6e, max Gronwall ratio %.6e\n", ob2d::to_string(r.status),
                ob2d::short_number(r.terminal.time).c_str(), r.terminal.V_L2, r.terminal.W_L2, r.max_ratio);
    if (r.status != ob2d::StepStatus::ok) std::fprintf(stderr, "%s\n", r.message.c_str());
    return status_exit(r.status);
}

int cmd_check(bool full) {
    bool all = true;
    ob2d::run_acceptance(full ? ob2d::CheckLevel::full : ob2d::CheckLevel::quick, [&](const ob2d::CheckOutcome& o) {
        all = all && o.passed;
        std::printf("%s\n", ob2d::format_outcome(o).c_str());
        std::fflush(stdout);
    });
    return all ? exit_ok : exit_check_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oldroyd-B 2D pseudo-spectral simulator"};
    app.require_subcommand(1);

    std::string config, out, axis;
    bool restart = false, parallel = false, quick = false, full = false;
    std::vector<double> values;
    double delta = 1e-6;
    std::uint64_t seed = 7;

    CLI::App* run = app.add_subcommand("run", "integrate one configuration");
    run->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory (default: output.dir of the config)");
    run->add_flag("--restart", restart, "continue from <out>/checkpoint.ob2c");

    CLI::App* sweep = app.add_subcommand("sweep", "one-parameter sweep");
    sweep->add_option("--config", config, "base JSON configuration")->required()->check(CLI::ExistingFile);
    sweep->add_option("--axis", axis, "alpha, gamma_u, eta, b or resolution")->required();
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
    sweep->add_option("--out", out, "output directory")->required();
    sweep->add_flag("--parallel", parallel, "run points concurrently (OB2D_THREADS caps the workers)");

    CLI::App* twin = app.add_subcommand("twin", "base and perturbed runs in lockstep");
    twin->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
    twin->add_option("--delta", delta, "perturbation size")->required();
    twin->add_option("--seed", seed, "perturbation seed");
    twin->add_option("--out", out, "output directory")->required();

    CLI::App* check = app.add_subcommand("check", "acceptance suite");
    auto* q = check->add_flag("--quick", quick, "reduced sizes, same tolerances");
    auto* f = check->add_flag("--full", full, "reference sizes");
    q->excludes(f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (*run) return cmd_run(config, out, restart);
        if (*sweep) return cmd_sweep(config, axis, values, out, parallel);
        if (*twin) return cmd_twin(config, delta, seed, out);
        return cmd_check(full);
    } catch (const ob2d::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return exit_config;
    } catch (const ob2d::IoError& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return exit_io;
    } catch (const ob2d::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return exit_blowup;
    }
}
