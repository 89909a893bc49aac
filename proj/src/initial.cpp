#include "ob2d/initial.hpp"

#include "ob2d/error.hpp"
#include "ob2d/norms.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace ob2d {
namespace {

class ModeStream {
public:
    explicit ModeStream(std::uint64_t seed) : rng_(seed) {}
    /// Uniform on [-1, 1), from the top 53 bits.
    double next() { return static_cast<double>(rng_() >> 11) * 0x1p-52 - 1.0; }

private:
    std::mt19937_64 rng_;
};

void check_band(const Grid& g, double kmin, double kmax) {
    if (!(kmin >= 1.0) || !(kmax >= kmin)) throw ConfigError("initial condition: band needs 1 <= kmin <= kmax");
    if (kmax > g.dealias_cutoff())
        throw ConfigError("initial condition: band kmax = " + std::to_string(kmax) +
                          " exceeds the dealias cutoff " + std::to_string(g.dealias_cutoff()) + " of this grid");
}

// Upper half-plane of the integer lattice inside the band, in an order that
// depends only on kmax.
ComplexArray band_spectrum(const Grid& g, ModeStream& stream, double kmin, double kmax, double decay) {
    ComplexArray s(g.spectral_size(), Complex(0.0, 0.0));
    const int K = static_cast<int>(std::floor(kmax));
    for (int j1 = -K; j1 <= K; ++j1) {
        for (int j2 = 0; j2 <= K; ++j2) {
            if (j2 == 0 && j1 <= 0) continue;
            const double re = stream.next();
            const double im = stream.next();
            const double r = std::hypot(static_cast<double>(j1), static_cast<double>(j2));
            if (r < kmin || r > kmax) continue;
            const Complex z = std::pow(1.0 + r, -decay) * Complex(re, im);
            s[g.slot(j1, j2)] = z;
            if (j2 == 0) s[g.slot(-j1, 0)] = std::conj(z);
        }
    }
    return s;
}

VectorField velocity_from_streamfunction(const GridPtr& g, const ComplexArray& psi) {
    ComplexArray a(psi.size()), b(psi.size());
    const Complex i(0.0, 1.0);
    for (std::size_t m = 0; m < psi.size(); ++m) {
        a[m] = i * g->k2()[m] * psi[m];
        b[m] = -i * g->k1()[m] * psi[m];
    }
    return VectorField{{ScalarField::from_spectral(g, std::move(a), "u1"), ScalarField::from_spectral(g, std::move(b), "u2")}};
}

double rms(const Grid& g, double squared_norm) { return std::sqrt(squared_norm) / g.length(); }

VectorField scaled(const VectorField& v, double factor) { return combine(factor, v, 0.0, v); }
SymTensorField scaled(const SymTensorField& t, double factor) { return combine(factor, t, 0.0, t); }

double squared(const VectorField& v) { return spectral_energy(v[0]) + spectral_energy(v[1]); }
double squared(const SymTensorField& t) {
    return spectral_energy(t.xx) + 2.0 * spectral_energy(t.xy) + spectral_energy(t.yy);
}

SymTensorField random_tensor(const GridPtr& g, ModeStream& stream, double kmin, double kmax) {
    return SymTensorField{ScalarField::from_spectral(g, band_spectrum(*g, stream, kmin, kmax, 2.0), "tau11"),
                          ScalarField::from_spectral(g, band_spectrum(*g, stream, kmin, kmax, 2.0), "tau12"),
                          ScalarField::from_spectral(g, band_spectrum(*g, stream, kmin, kmax, 2.0), "tau22")};
}

ScalarField band_filter(const ScalarField& f, double kmin, double kmax) {
    const Grid& g = f.grid();
    ComplexArray s = f.spectrum();
    for (std::size_t m = 0; m < s.size(); ++m) {
        const double r = g.k_magnitude()[m] / g.k0();
        if (r < kmin || r > kmax) s[m] = 0.0;
    }
    return ScalarField::from_spectral(f.grid_ptr(), std::move(s), f.name());
}

VectorField taylor_green(const GridPtr& g, double amplitude) {
    const int n = g->n();
    RealArray a(g->physical_size()), b(g->physical_size());
    for (int i = 0; i < n; ++i) {
        const double x = g->k0() * i * g->dx();
        for (int j = 0; j < n; ++j) {
            const double y = g->k0() * j * g->dx();
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            a[idx] = amplitude * std::sin(x) * std::cos(y);
            b[idx] = -amplitude * std::cos(x) * std::sin(y);
        }
    }
    return VectorField{{ScalarField::from_physical(g, std::move(a), "u1"), ScalarField::from_physical(g, std::move(b), "u2")}};
}

VectorField shear_layer(const GridPtr& g, double amplitude, double kmin, double kmax) {
    constexpr double pi = std::numbers::pi;
    const double rho = pi / 15.0;
    const double delta = 0.05;
    const int n = g->n();
    RealArray a(g->physical_size()), b(g->physical_size());
    for (int i = 0; i < n; ++i) {
        const double x = g->k0() * i * g->dx();
        for (int j = 0; j < n; ++j) {
            const double y = g->k0() * j * g->dx();
            const std::size_t idx = static_cast<std::size_t>(i) * n + j;
            a[idx] = y <= pi ? std::tanh((y - 0.5 * pi) / rho) : std::tanh((1.5 * pi - y) / rho);
            b[idx] = delta * std::sin(x);
        }
    }
    const VectorField raw{{ScalarField::from_physical(g, std::move(a)), ScalarField::from_physical(g, std::move(b))}};
    const VectorField band{{band_filter(raw[0], kmin, kmax).renamed("u1"), band_filter(raw[1], kmin, kmax).renamed("u2")}};
    return scaled(band, amplitude);
}

} // namespace

ScalarField random_bandlimited_field(const GridPtr& grid, std::uint64_t seed, double kmin, double kmax, double decay) {
    check_band(*grid, kmin, kmax);
    ModeStream stream(seed);
    return ScalarField::from_spectral(grid, band_spectrum(*grid, stream, kmin, kmax, decay));
}

State make_initial(const InitialConditionConfig& ic, const GridPtr& grid) {
    if (!(ic.amplitude >= 0.0)) throw ConfigError("initial condition: amplitude must be >= 0");
    ModeStream stream(ic.seed);
    VectorField u;
    switch (ic.kind) {
    case InitialKind::taylor_green:
        u = taylor_green(grid, ic.amplitude);
        break;
    case InitialKind::random_bandlimited: {
        check_band(*grid, ic.kmin, ic.kmax);
        const VectorField raw = velocity_from_streamfunction(grid, band_spectrum(*grid, stream, ic.kmin, ic.kmax, 3.0));
        const double r = rms(*grid, squared(raw));
        u = r > 0.0 ? scaled(raw, ic.amplitude / r) : raw;
        u.c[0] = u[0].renamed("u1");
        u.c[1] = u[1].renamed("u2");
        break;
    }
    case InitialKind::shear_layer:
        check_band(*grid, ic.kmin, ic.kmax);
        u = shear_layer(grid, ic.amplitude, ic.kmin, ic.kmax);
        break;
    }

    SymTensorField tau;
    switch (ic.tau_kind) {
    case TauKind::zero:
        tau = SymTensorField::zeros(grid);
        break;
    case TauKind::random_symmetric: {
        const double kmin = ic.kind == InitialKind::taylor_green ? 1.0 : ic.kmin;
        const double kmax = ic.kind == InitialKind::taylor_green ? std::min(4.0, double(grid->dealias_cutoff())) : ic.kmax;
        const SymTensorField raw = random_tensor(grid, stream, kmin, kmax);
        const double r = rms(*grid, squared(raw));
        tau = r > 0.0 ? scaled(raw, ic.amplitude / r) : raw;
        tau = SymTensorField{tau.xx.renamed("tau11"), tau.xy.renamed("tau12"), tau.yy.renamed("tau22")};
        break;
    }
    case TauKind::from_Du: {
        const SymTensorField du = strain_and_rotation(u).strain;
        tau = SymTensorField{du.xx.renamed("tau11"), du.xy.renamed("tau12"), du.yy.renamed("tau22")};
        break;
    }
    }
    return State{0.0, std::move(u), std::move(tau)};
}

State make_perturbation(const GridPtr& grid, std::uint64_t seed, double kmin, double kmax) {
    check_band(*grid, kmin, kmax);
    ModeStream stream(seed);
    const VectorField pu = velocity_from_streamfunction(grid, band_spectrum(*grid, stream, kmin, kmax, 3.0));
    const SymTensorField pt = random_tensor(grid, stream, kmin, kmax);
    const double su = squared(pu);
    const double st = squared(pt);
    if (!(su > 0.0) || !(st > 0.0)) throw ConfigError("perturbation: band holds no modes");
    const double half = std::sqrt(0.5);
    return State{0.0, scaled(pu, half / std::sqrt(su)), scaled(pt, half / std::sqrt(st))};
}

} // namespace ob2d
