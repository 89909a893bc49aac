#include "ob2d/norms.hpp"

#include "ob2d/error.hpp"
#include "ob2d/kernels.hpp"

#include <cmath>
#include <string>

namespace ob2d {
namespace {

void check_p(double p) {
    if (!(p >= 1.0)) throw ConfigError("lp_norm: p must be >= 1, got " + std::to_string(p));
}

// Rectangle rule of |m|^p for a pointwise magnitude array m >= 0.
double magnitude_norm(const Grid& g, const RealArray& mag, double p) {
    if (std::isinf(p)) return kernels::active().max_abs(mag.data(), mag.size());
    if (p == 2.0) return std::sqrt(kernels::active().sum_squares(mag.data(), mag.size()) * g.cell_area());
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < mag.size(); ++i) lane[i & 3] += std::pow(std::fabs(mag[i]), p);
    const double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    return std::pow(sum * g.cell_area(), 1.0 / p);
}

double weighted_energy(const ScalarField& f, const RealArray& weight) {
    const Grid& g = f.grid();
    return kernels::active().weighted_power(f.spectrum().data(), weight.data(), g.spectral_size()) *
           g.length() * g.length();
}

RealArray sobolev_weights(const Grid& g, double s, SobolevKind kind) {
    RealArray w(g.spectral_size());
    for (std::size_t m = 0; m < w.size(); ++m) {
        const double ksq = g.k_squared()[m];
        double sym2;
        if (kind == SobolevKind::inhomogeneous)
            sym2 = std::pow(1.0 + ksq, s);
        else
            sym2 = s == 0.0 ? 1.0 : std::pow(ksq, s);
        w[m] = g.mode_weight()[m] * sym2;
    }
    return w;
}

} // namespace

double lp_norm_samples(const Grid& grid, const RealArray& samples, double p) {
    check_p(p);
    if (samples.size() != grid.physical_size()) throw ConfigError("lp_norm: sample array has wrong size");
    return magnitude_norm(grid, samples, p);
}

double lp_norm(const ScalarField& f, double p) {
    check_p(p);
    return magnitude_norm(f.grid(), f.values(), p);
}

double lp_norm(const VectorField& v, double p) {
    check_p(p);
    const Grid& g = v.grid();
    RealArray mag(g.physical_size());
    kernels::active().dot2(mag.data(), v[0].values().data(), v[0].values().data(), v[1].values().data(),
                           v[1].values().data(), mag.size());
    for (double& x : mag) x = std::sqrt(x);
    return magnitude_norm(g, mag, p);
}

double lp_norm(const SymTensorField& tau, double p) {
    check_p(p);
    const Grid& g = tau.grid();
    RealArray mag(g.physical_size());
    const double* a = tau.xx.values().data();
    const double* c = tau.xy.values().data();
    const double* d = tau.yy.values().data();
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::sqrt(a[i] * a[i] + 2.0 * c[i] * c[i] + d[i] * d[i]);
    return magnitude_norm(g, mag, p);
}

double spectral_energy(const ScalarField& f) { return weighted_energy(f, f.grid().mode_weight()); }

double sobolev_norm(const ScalarField& f, double s, SobolevKind kind) {
    if (!(s >= 0.0)) throw ConfigError("sobolev_norm: s must be >= 0");
    return std::sqrt(weighted_energy(f, sobolev_weights(f.grid(), s, kind)));
}

double sobolev_norm(const VectorField& v, double s, SobolevKind kind) {
    if (!(s >= 0.0)) throw ConfigError("sobolev_norm: s must be >= 0");
    const RealArray w = sobolev_weights(v.grid(), s, kind);
    return std::sqrt(weighted_energy(v[0], w) + weighted_energy(v[1], w));
}

double sobolev_norm(const SymTensorField& tau, double s, SobolevKind kind) {
    if (!(s >= 0.0)) throw ConfigError("sobolev_norm: s must be >= 0");
    const RealArray w = sobolev_weights(tau.grid(), s, kind);
    return std::sqrt(weighted_energy(tau.xx, w) + 2.0 * weighted_energy(tau.xy, w) + weighted_energy(tau.yy, w));
}

int max_dyadic_index(const Grid& grid) {
    double kmax = 0.0;
    for (double k : grid.k_magnitude()) kmax = std::max(kmax, k);
    if (kmax < 1.0) return -1;
    return static_cast<int>(std::floor(std::log2(kmax)));
}

ScalarField dyadic_block(const ScalarField& f, int j) {
    if (j < -1) throw ConfigError("dyadic_block: j must be >= -1");
    const Grid& g = f.grid();
    RealArray keep(g.spectral_size());
    const double lo = j < 0 ? 0.0 : std::ldexp(1.0, j);
    const double hi = std::ldexp(1.0, j + 1);
    for (std::size_t m = 0; m < keep.size(); ++m) {
        const double k = g.k_magnitude()[m];
        keep[m] = (k >= lo && k < hi) ? 1.0 : 0.0;
    }
    ComplexArray out(g.spectral_size());
    kernels::active().scale_real(out.data(), f.spectrum().data(), keep.data(), out.size());
    return ScalarField::from_spectral(f.grid_ptr(), std::move(out));
}

double besov_norm(const ScalarField& f, double s, double r) {
    if (!(s > 0.0)) throw ConfigError("besov_norm: s must be > 0");
    if (!(r >= 1.0)) throw ConfigError("besov_norm: r must be >= 1");
    const int jmax = max_dyadic_index(f.grid());
    double acc = 0.0;
    for (int j = -1; j <= jmax; ++j) {
        const double term = std::pow(2.0, -j * s) * lp_norm(dyadic_block(f, j), infinity);
        if (std::isinf(r))
            acc = std::max(acc, term);
        else
            acc += std::pow(term, r);
    }
    return std::isinf(r) ? acc : std::pow(acc, 1.0 / r);
}

} // namespace ob2d
