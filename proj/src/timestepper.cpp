#include "ob2d/timestepper.hpp"

#include "ob2d/error.hpp"
#include "ob2d/kernels.hpp"
#include "ob2d/norms.hpp"
#include "ob2d/spectral.hpp"

#include <cmath>
#include <cstdio>

namespace ob2d {
namespace {

void exponentials(const RealArray& decay, double h, RealArray& out) {
    out.resize(decay.size());
    for (std::size_t m = 0; m < decay.size(); ++m) out[m] = std::exp(-decay[m] * h);
}

bool finite_spectra(const StateSpectra& s) {
    for (const auto& c : s)
        for (const Complex& z : c)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

void axpy_spectrum(ComplexArray& y, const ComplexArray& x, double c) {
    kernels::active().axpy(reinterpret_cast<double*>(y.data()), reinterpret_cast<const double*>(x.data()), c,
                           2 * y.size());
}

void project(const Grid& g, ComplexArray& a, ComplexArray& b) {
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double ksq = g.k_squared()[m];
        if (ksq == 0.0) continue;
        const Complex kdotu = (g.k1()[m] * a[m] + g.k2()[m] * b[m]) / ksq;
        a[m] -= g.k1()[m] * kdotu;
        b[m] -= g.k2()[m] * kdotu;
    }
}

} // namespace

void StepperConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("stepper: dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("stepper: t_end must be >= 0");
    if (!(cfl_target > 0.0 && cfl_target < 1.0)) throw ConfigError("stepper: cfl_target must lie in (0, 1)");
    if (max_steps < 0) throw ConfigError("stepper: max_steps must be >= 0");
    if (!(blowup_threshold > 0.0)) throw ConfigError("stepper: blowup_threshold must be > 0");
}

const char* to_string(StepStatus s) {
    switch (s) {
    case StepStatus::ok: return "ok";
    case StepStatus::blowup: return "blowup";
    case StepStatus::nonfinite: return "nonfinite";
    }
    return "unknown";
}

Stepper::Stepper(GridPtr grid, ModelParams params) : grid_(std::move(grid)), params_(params) {
    params_.validate();
    decay_u_ = velocity_decay(*grid_, params_);
    decay_t_ = stress_decay(*grid_, params_);
}

void Stepper::prepare(double dt) {
    if (dt == cached_dt_) return;
    exponentials(decay_u_, dt, e_u_);
    exponentials(decay_t_, dt, e_t_);
    exponentials(decay_u_, 0.5 * dt, eh_u_);
    exponentials(decay_t_, 0.5 * dt, eh_t_);
    cached_dt_ = dt;
}

double Stepper::dissipation_rate(const StateSpectra& s) const {
    return weighted_state_sum(*grid_, s, decay_u_, decay_t_, params_.energy_weight());
}

StepResult Stepper::step(const State& state, double dt, double blowup_threshold) {
    if (!(dt > 0.0)) throw ConfigError("step: dt must be > 0");
    prepare(dt);
    const Grid& g = *grid_;
    const auto& k = kernels::active();
    const std::size_t size = g.spectral_size();
    auto half = [&](int c) { return c < 2 ? eh_u_.data() : eh_t_.data(); };

    StepResult result;
    result.accepted_dt = dt;
    result.cfl_observed = dt * lp_norm(state.u, infinity) / g.dx();

    const StateSpectra x = spectra_of(state);
    const StateSpectra k1 = explicit_tendency(state, params_);
    const double d1 = dissipation_rate(x);

    StateSpectra stage;
    for (int c = 0; c < 5; ++c) {
        stage[c].resize(size);
        k.propagate(stage[c].data(), x[c].data(), k1[c].data(), half(c), 0.5 * dt, size);
    }
    const StateSpectra k2 = explicit_tendency(state_from_spectra(grid_, stage, state.time + 0.5 * dt), params_);
    const double d2 = dissipation_rate(stage);

    StateSpectra ehx;
    for (int c = 0; c < 5; ++c) {
        ehx[c].resize(size);
        k.scale_real(ehx[c].data(), x[c].data(), half(c), size);
        stage[c] = ehx[c];
        axpy_spectrum(stage[c], k2[c], 0.5 * dt);
    }
    const StateSpectra k3 = explicit_tendency(state_from_spectra(grid_, stage, state.time + 0.5 * dt), params_);
    const double d3 = dissipation_rate(stage);

    for (int c = 0; c < 5; ++c) k.propagate(stage[c].data(), ehx[c].data(), k3[c].data(), half(c), dt, size);
    const StateSpectra k4 = explicit_tendency(state_from_spectra(grid_, stage, state.time + dt), params_);
    const double d4 = dissipation_rate(stage);

    // E x + dt/6 (E k1 + 2 Eh (k2 + k3) + k4) = Eh (Eh (x + dt/6 k1) + dt/3 (k2 + k3)) + dt/6 k4
    StateSpectra next;
    for (int c = 0; c < 5; ++c) {
        next[c].resize(size);
        k.propagate(next[c].data(), x[c].data(), k1[c].data(), half(c), dt / 6.0, size);
        axpy_spectrum(next[c], k2[c], dt / 3.0);
        axpy_spectrum(next[c], k3[c], dt / 3.0);
        k.scale_real(next[c].data(), next[c].data(), half(c), size);
        axpy_spectrum(next[c], k4[c], dt / 6.0);
    }
    project(g, next[0], next[1]);

    result.dissipation_increment = dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
    if (!finite_spectra(next)) {
        result.status = StepStatus::nonfinite;
        result.state = state;
        return result;
    }
    result.state = state_from_spectra(grid_, next, state.time + dt);
    if (!result.state.all_finite()) {
        result.status = StepStatus::nonfinite;
    } else if (lp_norm(curl(result.state.u), infinity) > blowup_threshold) {
        result.status = StepStatus::blowup;
    }
    return result;
}

StepResult step(const State& state, const ModelParams& params, double dt) {
    Stepper stepper(state.grid_ptr(), params);
    return stepper.step(state, dt);
}

long total_steps(double origin, double dt, double t_end) {
    const double r = (t_end - origin) / dt;
    if (!(r > 1e-9)) return 0;
    return static_cast<long>(std::ceil(r - 1e-9));
}

double step_time(const Clock& clock, long k, double dt, double t_end) {
    const long total = total_steps(clock.origin, dt, t_end);
    return k >= total ? t_end : clock.origin + static_cast<double>(k) * dt;
}

IntegrationResult integrate(const State& state0, const ModelParams& params, const StepperConfig& cfg,
                            const StepObserver& observer, const Clock* clock) {
    cfg.validate();
    const Clock c = clock != nullptr ? *clock : Clock{state0.time, 0};
    const long total = total_steps(c.origin, cfg.dt, cfg.t_end);

    IntegrationResult out;
    out.last.state = state0;
    out.last.accepted_dt = 0.0;
    Stepper stepper(state0.grid_ptr(), params);

    for (long k = c.step + 1; k <= total; ++k) {
        if (cfg.max_steps > 0 && out.steps_taken >= cfg.max_steps) {
            out.stopped_by_max_steps = true;
            break;
        }
        const double t_prev = step_time(c, k - 1, cfg.dt, cfg.t_end);
        const double t_next = step_time(c, k, cfg.dt, cfg.t_end);
        double h = k < total ? cfg.dt : t_next - t_prev;
        if (std::fabs(h - cfg.dt) <= 1e-12 * cfg.dt) h = cfg.dt;

        StepResult r = stepper.step(out.last.state, h, cfg.blowup_threshold);
        r.state.time = t_next;
        ++out.steps_taken;
        if (r.cfl_observed > cfg.cfl_target) ++out.cfl_warnings;
        if (r.status != StepStatus::ok) {
            out.failure_time = t_next;
            char buf[160];
            std::snprintf(buf, sizeof buf, "step %ld: status %s at t = %.6g", k, to_string(r.status), t_next);
            out.message = buf;
            out.last = std::move(r);
            return out;
        }
        out.last = std::move(r);
        if (observer) {
            StepInfo info{k, t_next, h, out.last.cfl_observed, out.last.dissipation_increment};
            observer(out.last.state, info);
        }
    }
    return out;
}

} // namespace ob2d
