#pragma once

#include "ob2d/config.hpp"
#include "ob2d/simulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ob2d {

enum class SweepAxis { alpha, gamma_u, eta, b, resolution };

SweepAxis parse_axis(const std::string& name);
const char* to_string(SweepAxis axis);

struct SweepSpec {
    RunConfig base;
    SweepAxis axis = SweepAxis::alpha;
    std::vector<double> values;
    /// Ledger columns reported as terminal and peak values; empty means
    /// u_L2, tau_L2, grad_tau_L2, omega_Linf, tau_Linf, G_L2, energy_defect.
    std::vector<std::string> summary_metrics;
    /// Root directory for <axis>=<value>/ledger.csv and summary.csv; empty keeps results in memory.
    std::string out_dir;
    /// Run points concurrently (capped by OB2D_THREADS); results are identical to sequential mode.
    bool parallel = false;

    void validate() const;
};

struct SweepRow {
    double value = 0.0;
    StepStatus status = StepStatus::ok;
    /// Non-empty when the point failed before or during integration.
    std::string error;
    long steps = 0;
    double final_time = 0.0;
    NamedValues terminal;
    NamedValues peak;
    NamedValues accumulators;
    /// Plateau verdict per summary metric and accumulator (1 or 0).
    NamedValues plateau;
    double wall_seconds = 0.0;
};

/// Applies the axis value to a copy of the base config.
RunConfig sweep_point(const RunConfig& base, SweepAxis axis, double value);

/// One row per value in the given order. Failed points become rows; the
/// sweep never aborts. summary.csv excludes wall time, which goes to timings.csv.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Sub-directory name of a sweep point, e.g. "alpha=0.5".
std::string sweep_point_dir(SweepAxis axis, double value);

/// Variation over the last tail_fraction of the time span is below
/// ratio * tail_fraction of the total variation, i.e. the late rate of change is
/// below `ratio` times the mean rate. Series with zero total variation plateau.
bool plateaus(const std::vector<double>& times, const std::vector<double>& values, double tail_fraction = 0.2,
              double ratio = 0.1);

struct TwinSpec {
    double delta = 1e-6;
    std::uint64_t perturbation_seed = 7;
    /// Difference row every norm_cadence steps (plus initial and final rows).
    long norm_cadence = 10;
};

struct TwinRow {
    double time = 0.0;
    double V_L2 = 0.0;
    double W_L2 = 0.0;
    double gronwall_integral = 0.0;
    double ratio = 0.0;
};

struct TwinResult {
    StepStatus status = StepStatus::ok;
    std::string message;
    std::vector<TwinRow> rows;
    double max_ratio = 0.0;
    TwinRow terminal;
};

/// Base and perturbed runs stepped in lockstep. The Gronwall integrand
/// ||grad u~||_inf + ||grad tau~||_inf + ||tau||_inf^2 + ||tau~||_inf^2 is
/// integrated by the trapezoid rule and ratio = (||V||^2 + ||W||^2) / (delta^2 exp(integral)).
/// Writes <out_dir>/twin.csv when out_dir is non-empty.
TwinResult run_twin(const RunConfig& cfg, const TwinSpec& spec, const std::string& out_dir = {});

} // namespace ob2d
