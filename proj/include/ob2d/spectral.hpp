#pragma once

#include "ob2d/field.hpp"

#include <functional>

namespace ob2d {

enum class ZeroModeRule { zero, identity };

/// Fourier multiplier with a real per-mode symbol, optionally times i. Real
/// even symbols map real fields to real fields; odd (imaginary) symbols are
/// zeroed on the Nyquist rows so the output stays Hermitian.
class Multiplier {
public:
    Multiplier(GridPtr grid, RealArray symbol, bool imaginary = false);

    /// Symbol |k|^s. The zero mode gets 0, or 1 under ZeroModeRule::identity.
    static Multiplier power(GridPtr grid, double s, ZeroModeRule zero_mode);
    /// Symbol evaluated from a function of (k1, k2).
    static Multiplier from_function(GridPtr grid, const std::function<double(double, double)>& symbol,
                                    ZeroModeRule zero_mode, bool imaginary = false);

    ScalarField apply(const ScalarField& f) const;
    /// Pointwise product of two symbols (both real or exactly one imaginary).
    Multiplier then(const Multiplier& next) const;

    const RealArray& symbol() const { return symbol_; }
    bool imaginary() const { return imaginary_; }

private:
    GridPtr grid_;
    RealArray symbol_;
    bool imaginary_;
};

/// (-Delta)^{s/2} f, i.e. symbol |k|^s; callers pass 2*alpha for (-Delta)^alpha.
ScalarField fractional_laplacian(const ScalarField& f, double s);
ScalarField laplacian(const ScalarField& f);
/// Derivative along axis 0 (x1) or 1 (x2).
ScalarField partial(const ScalarField& f, int axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// (div tau)_j = sum_i d_i tau_ij
VectorField divergence(const SymTensorField& tau);
/// d1 v2 - d2 v1
ScalarField curl(const VectorField& v);
/// curl div tau = (d1^2 - d2^2) tau12 + d1 d2 (tau22 - tau11)
ScalarField curl_div(const SymTensorField& tau);

/// (-Delta)^{-1} curl div tau; zero mode set to 0.
ScalarField riesz_R(const SymTensorField& tau);
/// Lambda^{-2 gamma} curl div tau for gamma > 1.
ScalarField riesz_R_gamma(const SymTensorField& tau, double gamma);
/// Lambda^{-2 power} curl div tau for any power >= 0 (power 1 is riesz_R).
ScalarField riesz_power(const SymTensorField& tau, double power);

/// Velocity with curl u = omega and div u = 0: uhat = -i k_perp omega_hat / |k|^2.
VectorField biot_savart(const ScalarField& omega);
/// v - grad Delta^{-1} div v
VectorField leray_project(const VectorField& v);

/// Sharp 2/3-rule mask applied to the spectrum.
ScalarField dealias(const ScalarField& f);
/// Pointwise product, dealiased unless requested otherwise.
ScalarField product(const ScalarField& f, const ScalarField& g, bool dealiased = true);

/// Largest |k . uhat(k)| over modes: the spectral divergence defect.
double divergence_defect(const VectorField& v);

} // namespace ob2d
