#pragma once

#include "ob2d/config.hpp"
#include "ob2d/diagnostics.hpp"

#include <string>
#include <vector>

namespace ob2d {

struct RunOptions {
    /// Output directory for ledger.csv, config.json, snapshots and the
    /// checkpoint. Empty keeps everything in memory.
    std::string out_dir;
    /// Continue from <out_dir>/checkpoint.ob2c and append to the ledger.
    bool restart = false;
    /// Keep every ledger row in RunOutcome::rows.
    bool keep_rows = true;
};

struct RunOutcome {
    StepStatus status = StepStatus::ok;
    std::string message;
    /// Global index of the last accepted step.
    long last_step = 0;
    double final_time = 0.0;
    long cfl_warnings = 0;
    std::vector<DiagnosticsRecord> rows;
    EnergyLedger energy;
    State final_state;
};

inline constexpr const char* ledger_file = "ledger.csv";
inline constexpr const char* checkpoint_file = "checkpoint.ob2c";

/// Full run: initial condition, integration, a ledger row every
/// diagnostics.cadence steps (plus the initial and final rows), snapshots and
/// checkpoints at their cadences. Deterministic given the config.
RunOutcome run_simulation(const RunConfig& cfg, const RunOptions& options = {});

/// Name of the snapshot written at a given step, e.g. "snapshot_00000100.ob2d".
std::string snapshot_name(long step);

} // namespace ob2d
