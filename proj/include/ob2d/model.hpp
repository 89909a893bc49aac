#pragma once

#include "ob2d/field.hpp"

#include <array>

namespace ob2d {

/// Coefficients of
///   d_t u + (u.grad)u + nu Lambda^{2 gamma_u} u + grad pi = kappa div tau,
///   d_t tau + (u.grad)tau + beta tau + mu Lambda^{2 alpha} tau
///       = eta (Omega tau - tau Omega) + b (Du tau + tau Du) + gamma_f Du.
/// alpha = 0 switches the stress dissipation off entirely.
struct ModelParams {
    double nu = 1.0;
    double gamma_u = 1.0;
    double mu = 1.0;
    double alpha = 1.0;
    double beta = 0.0;
    double kappa = 1.0;
    double gamma_f = 1.0;
    double eta = 1.0;
    double b = 0.0;

    /// nu = mu = eta = kappa = gamma_f = 1, beta = b = 0, gamma_u = 1.
    static ModelParams paper_normalized(double alpha);
    /// Velocity dissipation Lambda^{2 gamma} with gamma > 1 and no stress diffusion.
    static ModelParams generalized_dissipation(double gamma_u);

    /// Weight w in E = (||u||^2 + w ||tau||^2)/2 that cancels the coupling and
    /// forcing terms in the energy balance: kappa / gamma_f, or 1 when either is 0.
    double energy_weight() const;
    /// True when the weighted energy balance is an exact identity (kappa and
    /// gamma_f both positive or both zero, and b = 0).
    bool energy_balanced() const;

    /// Throws ConfigError naming the first offending coefficient.
    void validate() const;
};

struct State {
    double time = 0.0;
    VectorField u;
    SymTensorField tau;

    const Grid& grid() const { return u.grid(); }
    const GridPtr& grid_ptr() const { return u.grid_ptr(); }
    bool all_finite() const { return u.all_finite() && tau.all_finite(); }
};

struct StrainRotation {
    SymTensorField strain;    // Du
    SkewTensorField rotation; // Omega
};

/// Du = (grad u + grad u^T)/2, Omega = (grad u - grad u^T)/2 with
/// (grad u)_ij = d_j u_i, so Omega12 = -omega/2.
StrainRotation strain_and_rotation(const VectorField& u);

/// Omega tau - tau Omega + b (Du tau + tau Du), pointwise and undealiased.
SymTensorField bilinear_Q(const SymTensorField& Du, const SkewTensorField& Omega, const SymTensorField& tau,
                          double b);

VectorField rhs_velocity(const State& state, const ModelParams& params);
SymTensorField rhs_stress(const State& state, const ModelParams& params);
ScalarField rhs_vorticity(const State& state, const ModelParams& params);
/// pihat = k_i k_j (kappa tauhat_ij - (u u)hat_ij) / |k|^2, zero mode 0.
ScalarField compute_pressure(const State& state, const ModelParams& params);

/// Spectra of the five evolved components in the order u1, u2, tau11, tau12, tau22.
using StateSpectra = std::array<ComplexArray, 5>;

StateSpectra spectra_of(const State& state);
State state_from_spectra(const GridPtr& grid, const StateSpectra& s, double time);

/// Everything except the linear dissipation (nu, mu, beta terms): advection,
/// coupling, corotation, b-term and forcing. The velocity part is projected.
StateSpectra explicit_tendency(const State& state, const ModelParams& params);

/// Per-mode decay rates of the linear part: nu |k|^{2 gamma_u} for u and
/// beta + mu |k|^{2 alpha} for tau.
RealArray velocity_decay(const Grid& grid, const ModelParams& params);
RealArray stress_decay(const Grid& grid, const ModelParams& params);

/// L^2 sum over modes of su |uhat|^2 + w st (|tau11|^2 + 2|tau12|^2 + |tau22|^2):
/// with unit symbols and w = 1 this is ||u||^2 + ||tau||^2.
double weighted_state_sum(const Grid& grid, const StateSpectra& s, const RealArray& su, const RealArray& st,
                          double stress_weight);

/// mask(u.grad f), the dealiased convective derivative.
ScalarField advect(const VectorField& u, const ScalarField& f);

} // namespace ob2d
