#pragma once

#include "ob2d/model.hpp"

#include <functional>
#include <string>

namespace ob2d {

struct StepperConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double cfl_target = 0.4;
    /// 0 means no limit.
    long max_steps = 0;
    /// Threshold on ||omega||_inf.
    double blowup_threshold = 1e8;

    void validate() const;
};

enum class StepStatus { ok, blowup, nonfinite };

const char* to_string(StepStatus s);

struct StepResult {
    State state;
    double accepted_dt = 0.0;
    /// dt ||u||_inf / dx at the start of the step.
    double cfl_observed = 0.0;
    StepStatus status = StepStatus::ok;
    /// Integral of the weighted dissipation rate over the step, by RK4 stage quadrature.
    double dissipation_increment = 0.0;
};

/// Integrating-factor (Lawson) RK4. The linear dissipation is applied through
/// exact per-mode exponentials, cached for the most recent dt.
class Stepper {
public:
    Stepper(GridPtr grid, ModelParams params);

    StepResult step(const State& state, double dt, double blowup_threshold = 1e8);

    const ModelParams& params() const { return params_; }
    /// Weighted dissipation rate nu ||Lambda^gamma_u u||^2 + w (mu ||Lambda^alpha tau||^2 + beta ||tau||^2).
    double dissipation_rate(const StateSpectra& s) const;

private:
    void prepare(double dt);

    GridPtr grid_;
    ModelParams params_;
    RealArray decay_u_, decay_t_;
    double cached_dt_ = -1.0;
    RealArray e_u_, e_t_, eh_u_, eh_t_;
};

StepResult step(const State& state, const ModelParams& params, double dt);

struct StepInfo {
    long step = 0;
    double time = 0.0;
    double dt = 0.0;
    double cfl = 0.0;
    double dissipation_increment = 0.0;
};

using StepObserver = std::function<void(const State&, const StepInfo&)>;

/// Step counting origin; a restarted run passes the original origin and the
/// number of steps already taken so step times are reproduced exactly.
struct Clock {
    double origin = 0.0;
    long step = 0;
};

struct IntegrationResult {
    StepResult last;
    long steps_taken = 0;
    long cfl_warnings = 0;
    bool stopped_by_max_steps = false;
    /// Time at which a non-ok status occurred.
    double failure_time = 0.0;
    std::string message;
};

/// Time of step k counted from clock.origin, with the last step clipped to t_end.
double step_time(const Clock& clock, long k, double dt, double t_end);
/// Number of steps from clock.origin to t_end.
long total_steps(double origin, double dt, double t_end);

/// Steps from state0 until t_end, a failure or max_steps. The observer runs
/// after every accepted step.
IntegrationResult integrate(const State& state0, const ModelParams& params, const StepperConfig& cfg,
                            const StepObserver& observer = {}, const Clock* clock = nullptr);

} // namespace ob2d
