#pragma once

#include "ob2d/model.hpp"
#include "ob2d/timestepper.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ob2d {

struct DiagnosticsConfig {
    /// Exponents r > 2 for ||tau||_{L^r}, ||omega||_{L^r} and the integral of ||omega||_{L^r}^{2r/(r-2)}.
    std::vector<double> r_list{4.0};
    /// Orders s >= 0 for the H^s norms of u and tau.
    std::vector<double> s_list{1.0, 2.0};
    /// (p, q) pairs for the integrals of ||grad u||_{L^p}^q and ||grad Gamma||_{L^p}^q.
    std::vector<std::pair<double, double>> pq_list{{4.0, 2.0}};
    /// Output row every `cadence` accepted steps.
    long cadence = 10;

    void validate() const;
};

using NamedValues = std::vector<std::pair<std::string, double>>;

/// One ledger row. Column order: time, step, norms, residuals, accumulators.
struct DiagnosticsRecord {
    double time = 0.0;
    long step = 0;
    NamedValues norms;
    NamedValues residuals;
    NamedValues accumulators;

    std::vector<std::string> column_names() const;
    std::vector<double> values() const;
    /// Throws std::out_of_range for an unknown column.
    double get(const std::string& name) const;
};

struct EnergyLedger {
    double initial_energy = 0.0;
    double dissipation_integral = 0.0;
    double current_energy = 0.0;

    double residual() const { return current_energy + dissipation_integral - initial_energy; }
};

/// |residual| / initial_energy, or |residual| when the initial energy is 0.
double energy_balance(const EnergyLedger& ledger);

/// (||u||^2 + w ||tau||^2) / 2 with w = params.energy_weight().
double energy(const State& state, const ModelParams& params);
/// nu ||Lambda^gamma_u u||^2 + w (mu ||Lambda^alpha tau||^2 + beta ||tau||^2).
double dissipation_rate(const State& state, const ModelParams& params);

/// (int (div tau).u + int Du:tau) / (||u|| ||tau||); 0 when either vanishes.
double cancellation_duality(const VectorField& u, const SymTensorField& tau);
/// int (u.grad tau):tau / (||u||_inf ||grad tau|| ||tau||). Vanishes for
/// dealiased fields; fields with content beyond the mask expose the aliasing defect.
double cancellation_transport(const VectorField& u, const SymTensorField& tau, bool dealias_product = true);
/// int (tau Omega - Omega tau):|tau|^{r-2} tau / (||Omega|| ||tau||_{L^{2(r-1)}}^{r-1}).
double cancellation_corotation(const SymTensorField& tau, const SkewTensorField& omega, double r);

/// omega - (kappa/nu) R tau. Requires nu > 0.
ScalarField compute_gamma(const State& state, const ModelParams& params);
/// omega - (kappa/nu) R_gamma tau for gamma > 1. Requires nu > 0.
ScalarField compute_G(const State& state, const ModelParams& params, double gamma);

/// [R_gamma, u.grad] tau = R_gamma(mask(u.grad tau)) - mask(u.grad R_gamma tau); gamma = 1 is R.
ScalarField commutator_R(const VectorField& u, const SymTensorField& tau, double gamma = 1.0);
/// ||[R, u.grad]tau||_{H^{(r-2)/(2r)}} / (||grad u|| ||tau||_{L^r} + ||u|| ||tau||).
double commutator_ratio(const VectorField& u, const SymTensorField& tau, double r);

struct GammaResidualOptions {
    /// Mutation switch: omit the commutator from the right-hand side.
    bool drop_commutator = false;
};

/// Relative L^2 mismatch between d_t Gamma + u.grad Gamma + nu Lambda^{2 gamma_u} Gamma,
/// with d_t Gamma taken from the model right-hand sides, and the closed-form
/// source (kappa/nu)(mu R Lambda^{2 alpha} tau + beta R tau - gamma_f R Du
/// + [R, u.grad]tau + eta R(tau Omega - Omega tau) - b R(Du tau + tau Du)),
/// with R = R_{gamma_u}. Requires nu > 0.
double gamma_equation_residual(const State& state, const ModelParams& params,
                               const GammaResidualOptions& options = {});

struct PositivityResult {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// lhs = int |h|^{p-2} h Lambda^s h, rhs = (2/p) ||Lambda^{s/2} |h|^{p/2}||^2.
PositivityResult positivity_check(const ScalarField& h, double p, double s);

/// Running ledger: energy balance, time-integral accumulators (trapezoid per
/// accepted step; the dissipation integral uses the stepper's stage quadrature),
/// and full output rows.
class Monitor {
public:
    Monitor(ModelParams params, DiagnosticsConfig config);

    /// Sets the initial energy and the integrands at the initial time.
    void start(const State& s0);
    void advance(const State& s, const StepInfo& info);

    DiagnosticsRecord record(const State& s, long step) const;
    std::vector<std::string> column_names() const;

    const EnergyLedger& ledger() const { return ledger_; }
    const NamedValues& accumulators() const { return accumulators_; }

    /// Complete internal state for checkpoints.
    NamedValues save() const;
    void restore(const NamedValues& saved);

private:
    std::vector<double> integrands(const State& s) const;

    ModelParams params_;
    DiagnosticsConfig config_;
    EnergyLedger ledger_;
    NamedValues accumulators_;
    std::vector<double> previous_;
};

} // namespace ob2d
