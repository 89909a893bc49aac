#include "ob2d/simulation.hpp"

#include "ob2d/error.hpp"
#include "ob2d/initial.hpp"
#include "ob2d/io.hpp"

#include <cstdio>
#include <fstream>
#include <memory>

namespace ob2d {

std::string snapshot_name(long step) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "snapshot_%08ld.ob2d", step);
    return buf;
}

RunOutcome run_simulation(const RunConfig& cfg, const RunOptions& options) {
    cfg.validate();
    const GridPtr grid = Grid::create(cfg.grid.n, cfg.grid.length);
    const bool files = !options.out_dir.empty();
    if (options.restart && !files) throw ConfigError("restart needs an output directory");
    const std::string dir = options.out_dir;
    if (files) ensure_directory(dir);

    Monitor monitor(cfg.params, cfg.diagnostics);
    State state0;
    Clock clock;
    if (options.restart) {
        const Checkpoint cp = read_checkpoint(dir + "/" + checkpoint_file);
        if (cp.n != static_cast<std::uint64_t>(cfg.grid.n) || cp.length != cfg.grid.length)
            throw ConfigError("restart: checkpoint grid does not match the config");
        if (cp.dt != cfg.stepper.dt) throw ConfigError("restart: checkpoint dt does not match the config");
        state0 = state_from_spectra(grid, cp.spectra, cp.time);
        clock = cp.clock;
        monitor.restore(cp.monitor);
    } else {
        state0 = make_initial(cfg.initial, grid);
        clock = Clock{state0.time, 0};
        monitor.start(state0);
    }

    RunOutcome out;
    std::unique_ptr<LedgerWriter> ledger;
    const std::vector<std::string> columns = monitor.column_names();
    if (files) {
        ledger = std::make_unique<LedgerWriter>(dir + "/" + ledger_file, columns, options.restart);
        std::ofstream(dir + "/config.json") << serialize_config(cfg);
    }
    auto emit = [&](const State& s, long step) {
        DiagnosticsRecord rec = monitor.record(s, step);
        if (ledger) ledger->write(rec);
        if (options.keep_rows) out.rows.push_back(std::move(rec));
    };
    auto save_checkpoint = [&](const State& s, long step) {
        Checkpoint cp;
        cp.n = static_cast<std::uint64_t>(grid->n());
        cp.length = grid->length();
        cp.clock = Clock{clock.origin, step};
        cp.time = s.time;
        cp.dt = cfg.stepper.dt;
        cp.spectra = spectra_of(s);
        cp.monitor = monitor.save();
        write_checkpoint(dir + "/" + checkpoint_file, cp);
    };
    auto save_snapshot = [&](const State& s, long step) {
        write_snapshot(dir + "/" + snapshot_name(step), make_snapshot(s, cfg.params));
    };

    if (!options.restart) {
        emit(state0, 0);
        if (files && cfg.output.snapshot_every > 0) save_snapshot(state0, 0);
    }

    const long total = total_steps(clock.origin, cfg.stepper.dt, cfg.stepper.t_end);
    long last_row = clock.step;
    auto observer = [&](const State& s, const StepInfo& info) {
        monitor.advance(s, info);
        if (info.step % cfg.diagnostics.cadence == 0 || info.step == total) {
            emit(s, info.step);
            last_row = info.step;
        }
        if (!files) return;
        if (cfg.output.snapshot_every > 0 && info.step % cfg.output.snapshot_every == 0) save_snapshot(s, info.step);
        if (cfg.output.checkpoint_every > 0 && (info.step % cfg.output.checkpoint_every == 0 || info.step == total))
            save_checkpoint(s, info.step);
    };

    const IntegrationResult res = integrate(state0, cfg.params, cfg.stepper, observer, &clock);
    out.status = res.last.status;
    out.message = res.message;
    out.cfl_warnings = res.cfl_warnings;
    out.last_step = clock.step + res.steps_taken - (res.last.status == StepStatus::ok ? 0 : 1);
    out.final_state = res.last.state;
    out.final_time = res.last.state.time;

    if (res.last.status == StepStatus::blowup) {
        const long step = clock.step + res.steps_taken;
        monitor.advance(res.last.state, StepInfo{step, res.failure_time, res.last.accepted_dt, res.last.cfl_observed,
                                                 res.last.dissipation_increment});
        emit(res.last.state, step);
    } else if (res.last.status == StepStatus::ok && res.stopped_by_max_steps && last_row != out.last_step) {
        emit(res.last.state, out.last_step);
        if (files && cfg.output.checkpoint_every > 0) save_checkpoint(res.last.state, out.last_step);
    }
    out.energy = monitor.ledger();
    return out;
}

} // namespace ob2d
