#include "ob2d/spectral.hpp"

#include "ob2d/error.hpp"
#include "ob2d/kernels.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace ob2d {
namespace {

ComplexArray apply_real(const Grid& g, const ComplexArray& in, const RealArray& sym) {
    ComplexArray out(g.spectral_size());
    kernels::active().scale_real(out.data(), in.data(), sym.data(), out.size());
    return out;
}

ComplexArray apply_imag(const Grid& g, const ComplexArray& in, const RealArray& sym) {
    ComplexArray out(g.spectral_size());
    kernels::active().scale_imag(out.data(), in.data(), sym.data(), out.size());
    return out;
}

// Multiplies by |k|^{-2 power} away from the zero mode, which is set to 0.
RealArray inverse_power_symbol(const Grid& g, double power) {
    RealArray sym(g.spectral_size());
    const auto& ksq = g.k_squared();
    for (std::size_t m = 0; m < sym.size(); ++m)
        sym[m] = ksq[m] > 0.0 ? (power == 1.0 ? 1.0 / ksq[m] : std::pow(ksq[m], -power)) : 0.0;
    return sym;
}

} // namespace

Multiplier::Multiplier(GridPtr grid, RealArray symbol, bool imaginary)
    : grid_(std::move(grid)), symbol_(std::move(symbol)), imaginary_(imaginary) {
    if (!grid_ || symbol_.size() != grid_->spectral_size())
        throw ConfigError("multiplier: symbol size does not match grid");
    if (imaginary_) {
        // Odd symbols cannot be represented on the self-conjugate Nyquist rows.
        const int n = grid_->n();
        const int h = grid_->half();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < h; ++b)
                if (a == n / 2 || b == n / 2) symbol_[static_cast<std::size_t>(a) * h + b] = 0.0;
    }
}

Multiplier Multiplier::power(GridPtr grid, double s, ZeroModeRule zero_mode) {
    RealArray sym(grid->spectral_size());
    const auto& kmag = grid->k_magnitude();
    for (std::size_t m = 0; m < sym.size(); ++m) sym[m] = s == 0.0 ? 1.0 : std::pow(kmag[m], s);
    sym[0] = zero_mode == ZeroModeRule::identity ? 1.0 : 0.0;
    return Multiplier(std::move(grid), std::move(sym));
}

Multiplier Multiplier::from_function(GridPtr grid, const std::function<double(double, double)>& symbol,
                                     ZeroModeRule zero_mode, bool imaginary) {
    RealArray sym(grid->spectral_size());
    for (std::size_t m = 0; m < sym.size(); ++m) sym[m] = symbol(grid->k1()[m], grid->k2()[m]);
    sym[0] = zero_mode == ZeroModeRule::identity ? 1.0 : 0.0;
    return Multiplier(std::move(grid), std::move(sym), imaginary);
}

ScalarField Multiplier::apply(const ScalarField& f) const {
    const Grid& g = f.grid();
    if (g.spectral_size() != symbol_.size()) throw ConfigError("multiplier: grid mismatch");
    ComplexArray out = imaginary_ ? apply_imag(g, f.spectrum(), symbol_) : apply_real(g, f.spectrum(), symbol_);
    return ScalarField::from_spectral(f.grid_ptr(), std::move(out));
}

Multiplier Multiplier::then(const Multiplier& next) const {
    RealArray sym(symbol_.size());
    const double sign = (imaginary_ && next.imaginary_) ? -1.0 : 1.0;
    for (std::size_t m = 0; m < sym.size(); ++m) sym[m] = sign * symbol_[m] * next.symbol_[m];
    return Multiplier(grid_, std::move(sym), imaginary_ != next.imaginary_);
}

ScalarField fractional_laplacian(const ScalarField& f, double s) {
    if (!(s >= 0.0)) throw ConfigError("fractional_laplacian: exponent must be >= 0");
    f.require_finite("fractional_laplacian");
    if (s == 0.0) return f;
    RealArray sym(f.grid().spectral_size());
    const auto& kmag = f.grid().k_magnitude();
    const auto& ksq = f.grid().k_squared();
    for (std::size_t m = 0; m < sym.size(); ++m) sym[m] = s == 2.0 ? ksq[m] : std::pow(kmag[m], s);
    sym[0] = 0.0;
    return ScalarField::from_spectral(f.grid_ptr(), apply_real(f.grid(), f.spectrum(), sym));
}

ScalarField laplacian(const ScalarField& f) {
    RealArray sym(f.grid().spectral_size());
    const auto& ksq = f.grid().k_squared();
    for (std::size_t m = 0; m < sym.size(); ++m) sym[m] = -ksq[m];
    return ScalarField::from_spectral(f.grid_ptr(), apply_real(f.grid(), f.spectrum(), sym));
}

ScalarField partial(const ScalarField& f, int axis) {
    const Grid& g = f.grid();
    return ScalarField::from_spectral(f.grid_ptr(),
                                      apply_imag(g, f.spectrum(), axis == 0 ? g.d1() : g.d2()));
}

VectorField gradient(const ScalarField& f) { return VectorField{{partial(f, 0), partial(f, 1)}}; }

ScalarField divergence(const VectorField& v) {
    const Grid& g = v.grid();
    ComplexArray out = apply_imag(g, v[0].spectrum(), g.d1());
    kernels::active().accumulate_imag(out.data(), v[1].spectrum().data(), g.d2().data(), 1.0, out.size());
    return ScalarField::from_spectral(v.grid_ptr(), std::move(out));
}

VectorField divergence(const SymTensorField& tau) {
    const Grid& g = tau.grid();
    const auto& k = kernels::active();
    ComplexArray first = apply_imag(g, tau.xx.spectrum(), g.d1());
    k.accumulate_imag(first.data(), tau.xy.spectrum().data(), g.d2().data(), 1.0, first.size());
    ComplexArray second = apply_imag(g, tau.xy.spectrum(), g.d1());
    k.accumulate_imag(second.data(), tau.yy.spectrum().data(), g.d2().data(), 1.0, second.size());
    return VectorField{{ScalarField::from_spectral(tau.grid_ptr(), std::move(first)),
                        ScalarField::from_spectral(tau.grid_ptr(), std::move(second))}};
}

ScalarField curl(const VectorField& v) {
    const Grid& g = v.grid();
    ComplexArray out = apply_imag(g, v[1].spectrum(), g.d1());
    kernels::active().accumulate_imag(out.data(), v[0].spectrum().data(), g.d2().data(), -1.0, out.size());
    return ScalarField::from_spectral(v.grid_ptr(), std::move(out), "omega");
}

namespace {

// Spectrum of curl div tau scaled by a per-mode real factor.
ComplexArray curl_div_spectrum(const SymTensorField& tau, const RealArray* scale) {
    const Grid& g = tau.grid();
    const std::size_t size = g.spectral_size();
    RealArray diff(size), mixed(size);
    for (std::size_t m = 0; m < size; ++m) {
        // i d1 * i d1 - i d2 * i d2 = -(k1^2 - k2^2); (i d1)(i d2) = -k1 k2
        const double s = scale != nullptr ? (*scale)[m] : 1.0;
        diff[m] = -(g.d1()[m] * g.d1()[m] - g.d2()[m] * g.d2()[m]) * s;
        mixed[m] = -(g.d1()[m] * g.d2()[m]) * s;
    }
    const auto& k = kernels::active();
    ComplexArray out = apply_real(g, tau.xy.spectrum(), diff);
    k.accumulate_real(out.data(), tau.yy.spectrum().data(), mixed.data(), 1.0, size);
    k.accumulate_real(out.data(), tau.xx.spectrum().data(), mixed.data(), -1.0, size);
    return out;
}

} // namespace

ScalarField curl_div(const SymTensorField& tau) {
    return ScalarField::from_spectral(tau.grid_ptr(), curl_div_spectrum(tau, nullptr));
}

ScalarField riesz_power(const SymTensorField& tau, double power) {
    if (!(power >= 0.0)) throw ConfigError("riesz_power: power must be >= 0");
    const RealArray scale = inverse_power_symbol(tau.grid(), power);
    return ScalarField::from_spectral(tau.grid_ptr(), curl_div_spectrum(tau, &scale));
}

ScalarField riesz_R(const SymTensorField& tau) {
    tau.xx.require_finite("riesz_R");
    tau.xy.require_finite("riesz_R");
    tau.yy.require_finite("riesz_R");
    return riesz_power(tau, 1.0);
}

ScalarField riesz_R_gamma(const SymTensorField& tau, double gamma) {
    if (!(gamma > 1.0))
        throw ConfigError("riesz_R_gamma: gamma must exceed 1, got " + std::to_string(gamma));
    return riesz_power(tau, gamma);
}

VectorField biot_savart(const ScalarField& omega) {
    const Grid& g = omega.grid();
    double amplitude = 1.0;
    for (double v : omega.values()) amplitude = std::max(amplitude, std::fabs(v));
    if (std::abs(omega.spectrum()[0]) > 1e-12 * amplitude)
        throw ConfigError("biot_savart: vorticity must have zero mean");
    const RealArray inv = inverse_power_symbol(g, 1.0);
    RealArray s1(g.spectral_size()), s2(g.spectral_size());
    for (std::size_t m = 0; m < s1.size(); ++m) {
        // uhat = i (k2, -k1) omega_hat / |k|^2
        s1[m] = g.d2()[m] * inv[m];
        s2[m] = -g.d1()[m] * inv[m];
    }
    return VectorField{{ScalarField::from_spectral(omega.grid_ptr(), apply_imag(g, omega.spectrum(), s1), "u1"),
                        ScalarField::from_spectral(omega.grid_ptr(), apply_imag(g, omega.spectrum(), s2), "u2")}};
}

VectorField leray_project(const VectorField& v) {
    const Grid& g = v.grid();
    const std::size_t size = g.spectral_size();
    const RealArray inv = inverse_power_symbol(g, 1.0);
    RealArray p11(size), p12(size), p22(size);
    for (std::size_t m = 0; m < size; ++m) {
        const double a = g.k1()[m];
        const double b = g.k2()[m];
        p11[m] = 1.0 - a * a * inv[m];
        p12[m] = -a * b * inv[m];
        p22[m] = 1.0 - b * b * inv[m];
    }
    const auto& k = kernels::active();
    ComplexArray first = apply_real(g, v[0].spectrum(), p11);
    k.accumulate_real(first.data(), v[1].spectrum().data(), p12.data(), 1.0, size);
    ComplexArray second = apply_real(g, v[1].spectrum(), p22);
    k.accumulate_real(second.data(), v[0].spectrum().data(), p12.data(), 1.0, size);
    return VectorField{{ScalarField::from_spectral(v.grid_ptr(), std::move(first), v[0].name()),
                        ScalarField::from_spectral(v.grid_ptr(), std::move(second), v[1].name())}};
}

ScalarField dealias(const ScalarField& f) {
    return ScalarField::from_spectral(f.grid_ptr(), apply_real(f.grid(), f.spectrum(), f.grid().dealias_mask()),
                                      f.name());
}

ScalarField product(const ScalarField& f, const ScalarField& g, bool dealiased) {
    RealArray values(f.grid().physical_size());
    kernels::active().mul(values.data(), f.values().data(), g.values().data(), values.size());
    ScalarField raw = ScalarField::from_physical(f.grid_ptr(), std::move(values));
    return dealiased ? dealias(raw) : raw;
}

double divergence_defect(const VectorField& v) {
    const Grid& g = v.grid();
    double worst = 0.0;
    for (std::size_t m = 0; m < g.spectral_size(); ++m) {
        const Complex d = g.k1()[m] * v[0].spectrum()[m] + g.k2()[m] * v[1].spectrum()[m];
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

} // namespace ob2d
