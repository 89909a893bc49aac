#include "ob2d/model.hpp"

#include "ob2d/error.hpp"
#include "ob2d/kernels.hpp"
#include "ob2d/spectral.hpp"

#include <cmath>
#include <string>

namespace ob2d {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("model parameters: ") + what);
}

// Forward transform of physical samples followed by the dealias mask.
ComplexArray masked_forward(const Grid& g, const RealArray& values) {
    ComplexArray s(g.spectral_size());
    g.forward(values.data(), s.data());
    kernels::active().scale_real(s.data(), s.data(), g.dealias_mask().data(), s.size());
    return s;
}

void project_in_place(const Grid& g, ComplexArray& a, ComplexArray& b) {
    const auto& k1 = g.k1();
    const auto& k2 = g.k2();
    const auto& ksq = g.k_squared();
    for (std::size_t m = 0; m < a.size(); ++m) {
        if (ksq[m] == 0.0) continue;
        const Complex kdotu = (k1[m] * a[m] + k2[m] * b[m]) / ksq[m];
        a[m] -= k1[m] * kdotu;
        b[m] -= k2[m] * kdotu;
    }
}

struct Gradients {
    ScalarField d11, d12, d21, d22; // dij = d_j u_i
};

Gradients velocity_gradients(const VectorField& u) {
    return {partial(u[0], 0), partial(u[0], 1), partial(u[1], 0), partial(u[1], 1)};
}

RealArray power_of_ksq(const Grid& g, double exponent, double coefficient) {
    RealArray out(g.spectral_size());
    const auto& ksq = g.k_squared();
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] = coefficient * (exponent == 1.0 ? ksq[m] : std::pow(ksq[m], exponent));
    return out;
}

} // namespace

ModelParams ModelParams::paper_normalized(double alpha) {
    ModelParams p;
    p.alpha = alpha;
    return p;
}

ModelParams ModelParams::generalized_dissipation(double gamma_u) {
    ModelParams p;
    p.gamma_u = gamma_u;
    p.mu = 0.0;
    p.alpha = 0.0;
    return p;
}

double ModelParams::energy_weight() const {
    return (kappa > 0.0 && gamma_f > 0.0) ? kappa / gamma_f : 1.0;
}

bool ModelParams::energy_balanced() const { return b == 0.0 && (kappa > 0.0) == (gamma_f > 0.0); }

void ModelParams::validate() const {
    for (double v : {nu, gamma_u, mu, alpha, beta, kappa, gamma_f, eta, b})
        require(std::isfinite(v), "all coefficients must be finite");
    require(nu >= 0.0, "nu must be >= 0");
    require(gamma_u >= 1.0, "gamma_u must be >= 1");
    require(mu >= 0.0, "mu must be >= 0");
    require(alpha >= 0.0, "alpha must be >= 0");
    require(beta >= 0.0, "beta must be >= 0");
    require(kappa >= 0.0, "kappa must be >= 0");
    require(gamma_f >= 0.0, "gamma_f must be >= 0");
    require(std::fabs(b) <= 1.0, "b must lie in [-1, 1]");
}

StrainRotation strain_and_rotation(const VectorField& u) {
    const Gradients d = velocity_gradients(u);
    SymTensorField strain{d.d11.renamed("Du11"), combine(0.5, d.d12, 0.5, d.d21).renamed("Du12"),
                          d.d22.renamed("Du22")};
    SkewTensorField rotation{combine(0.5, d.d12, -0.5, d.d21).renamed("Omega12")};
    return {std::move(strain), std::move(rotation)};
}

SymTensorField bilinear_Q(const SymTensorField& Du, const SkewTensorField& Omega, const SymTensorField& tau,
                          double b) {
    const Grid& g = tau.grid();
    const std::size_t n = g.physical_size();
    RealArray q11(n), q12(n), q22(n);
    kernels::active().corotation(q11.data(), q12.data(), q22.data(), tau.xx.values().data(),
                                 tau.xy.values().data(), tau.yy.values().data(), Omega.xy.values().data(), n);
    const double* p = Du.xx.values().data();
    const double* q = Du.xy.values().data();
    const double* r = Du.yy.values().data();
    const double* a = tau.xx.values().data();
    const double* c = tau.xy.values().data();
    const double* d = tau.yy.values().data();
    for (std::size_t i = 0; i < n; ++i) {
        q11[i] = -q11[i] + b * (2.0 * (p[i] * a[i] + q[i] * c[i]));
        q12[i] = -q12[i] + b * (p[i] * c[i] + q[i] * d[i] + q[i] * a[i] + r[i] * c[i]);
        q22[i] = -q22[i] + b * (2.0 * (q[i] * c[i] + r[i] * d[i]));
    }
    const GridPtr& gp = tau.grid_ptr();
    return SymTensorField{ScalarField::from_physical(gp, std::move(q11), "Q11"),
                          ScalarField::from_physical(gp, std::move(q12), "Q12"),
                          ScalarField::from_physical(gp, std::move(q22), "Q22")};
}

ScalarField advect(const VectorField& u, const ScalarField& f) {
    const Grid& g = f.grid();
    const ScalarField f1 = partial(f, 0);
    const ScalarField f2 = partial(f, 1);
    RealArray values(g.physical_size());
    kernels::active().dot2(values.data(), u[0].values().data(), f1.values().data(), u[1].values().data(),
                           f2.values().data(), values.size());
    return ScalarField::from_spectral(f.grid_ptr(), masked_forward(g, values));
}

StateSpectra explicit_tendency(const State& state, const ModelParams& params) {
    const Grid& g = state.grid();
    const auto& k = kernels::active();
    const std::size_t n = g.physical_size();
    const std::size_t size = g.spectral_size();
    const VectorField& u = state.u;
    const SymTensorField& tau = state.tau;
    const double* u1 = u[0].values().data();
    const double* u2 = u[1].values().data();

    const Gradients d = velocity_gradients(u);
    StateSpectra out;

    // Velocity: -mask(u.grad u) + kappa div tau, then projected.
    RealArray work(n);
    k.dot2(work.data(), u1, d.d11.values().data(), u2, d.d12.values().data(), n);
    out[0] = masked_forward(g, work);
    k.dot2(work.data(), u1, d.d21.values().data(), u2, d.d22.values().data(), n);
    out[1] = masked_forward(g, work);
    for (std::size_t m = 0; m < size; ++m) {
        out[0][m] = -out[0][m];
        out[1][m] = -out[1][m];
    }
    if (params.kappa != 0.0) {
        k.accumulate_imag(out[0].data(), tau.xx.spectrum().data(), g.d1().data(), params.kappa, size);
        k.accumulate_imag(out[0].data(), tau.xy.spectrum().data(), g.d2().data(), params.kappa, size);
        k.accumulate_imag(out[1].data(), tau.xy.spectrum().data(), g.d1().data(), params.kappa, size);
        k.accumulate_imag(out[1].data(), tau.yy.spectrum().data(), g.d2().data(), params.kappa, size);
    }
    project_in_place(g, out[0], out[1]);

    // Stress: all pointwise terms are gathered in physical space and masked once.
    RealArray w(n), cor11(n), cor12(n), cor22(n);
    const double* g12 = d.d12.values().data();
    const double* g21 = d.d21.values().data();
    for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 * (g12[i] - g21[i]);
    k.corotation(cor11.data(), cor12.data(), cor22.data(), tau.xx.values().data(), tau.xy.values().data(),
                 tau.yy.values().data(), w.data(), n);

    const double* p = d.d11.values().data();
    const double* r = d.d22.values().data();
    const double* a = tau.xx.values().data();
    const double* c = tau.xy.values().data();
    const double* dd = tau.yy.values().data();
    const std::array<const ScalarField*, 3> comps{&tau.xx, &tau.xy, &tau.yy};
    const std::array<const RealArray*, 3> cor{&cor11, &cor12, &cor22};
    for (int comp = 0; comp < 3; ++comp) {
        const ScalarField t1 = partial(*comps[comp], 0);
        const ScalarField t2 = partial(*comps[comp], 1);
        k.dot2(work.data(), u1, t1.values().data(), u2, t2.values().data(), n);
        const double* co = cor[comp]->data();
        for (std::size_t i = 0; i < n; ++i) {
            double v = -work[i] - params.eta * co[i];
            if (params.b != 0.0) {
                const double q = 0.5 * (g12[i] + g21[i]);
                double s;
                if (comp == 0)
                    s = 2.0 * (p[i] * a[i] + q * c[i]);
                else if (comp == 1)
                    s = p[i] * c[i] + q * dd[i] + q * a[i] + r[i] * c[i];
                else
                    s = 2.0 * (q * c[i] + r[i] * dd[i]);
                v += params.b * s;
            }
            work[i] = v;
        }
        out[2 + comp] = masked_forward(g, work);
    }
    if (params.gamma_f != 0.0) {
        const double gf = params.gamma_f;
        auto add = [&](ComplexArray& dst, const ScalarField& src, double c0) {
            auto* x = reinterpret_cast<double*>(dst.data());
            k.axpy(x, reinterpret_cast<const double*>(src.spectrum().data()), c0, 2 * size);
        };
        add(out[2], d.d11, gf);
        add(out[3], d.d12, 0.5 * gf);
        add(out[3], d.d21, 0.5 * gf);
        add(out[4], d.d22, gf);
    }
    return out;
}

RealArray velocity_decay(const Grid& grid, const ModelParams& params) {
    return power_of_ksq(grid, params.gamma_u, params.nu);
}

RealArray stress_decay(const Grid& grid, const ModelParams& params) {
    RealArray out = params.alpha > 0.0 ? power_of_ksq(grid, params.alpha, params.mu)
                                       : RealArray(grid.spectral_size(), 0.0);
    for (double& v : out) v += params.beta;
    return out;
}

double weighted_state_sum(const Grid& grid, const StateSpectra& s, const RealArray& su, const RealArray& st,
                          double stress_weight) {
    const auto& k = kernels::active();
    const std::size_t size = grid.spectral_size();
    const RealArray& mw = grid.mode_weight();
    RealArray wu(size), wt(size);
    for (std::size_t m = 0; m < size; ++m) {
        wu[m] = mw[m] * su[m];
        wt[m] = mw[m] * st[m];
    }
    const double velocity = k.weighted_power(s[0].data(), wu.data(), size) + k.weighted_power(s[1].data(), wu.data(), size);
    const double stress = k.weighted_power(s[2].data(), wt.data(), size) +
                          2.0 * k.weighted_power(s[3].data(), wt.data(), size) +
                          k.weighted_power(s[4].data(), wt.data(), size);
    return (velocity + stress_weight * stress) * grid.length() * grid.length();
}

StateSpectra spectra_of(const State& state) {
    return {state.u[0].spectrum(), state.u[1].spectrum(), state.tau.xx.spectrum(), state.tau.xy.spectrum(),
            state.tau.yy.spectrum()};
}

State state_from_spectra(const GridPtr& grid, const StateSpectra& s, double time) {
    return State{time,
                 VectorField{{ScalarField::from_spectral(grid, s[0], "u1"),
                              ScalarField::from_spectral(grid, s[1], "u2")}},
                 SymTensorField{ScalarField::from_spectral(grid, s[2], "tau11"),
                                ScalarField::from_spectral(grid, s[3], "tau12"),
                                ScalarField::from_spectral(grid, s[4], "tau22")}};
}

namespace {

StateSpectra full_tendency(const State& state, const ModelParams& params) {
    StateSpectra t = explicit_tendency(state, params);
    const Grid& g = state.grid();
    const RealArray lu = velocity_decay(g, params);
    const RealArray lt = stress_decay(g, params);
    const StateSpectra x = spectra_of(state);
    const auto& k = kernels::active();
    for (int c = 0; c < 5; ++c)
        k.accumulate_real(t[c].data(), x[c].data(), (c < 2 ? lu : lt).data(), -1.0, t[c].size());
    return t;
}

} // namespace

VectorField rhs_velocity(const State& state, const ModelParams& params) {
    StateSpectra t = full_tendency(state, params);
    const GridPtr& gp = state.grid_ptr();
    VectorField out{{ScalarField::from_spectral(gp, std::move(t[0]), "du1"),
                     ScalarField::from_spectral(gp, std::move(t[1]), "du2")}};
    out[0].require_finite("rhs_velocity");
    out[1].require_finite("rhs_velocity");
    return out;
}

SymTensorField rhs_stress(const State& state, const ModelParams& params) {
    StateSpectra t = full_tendency(state, params);
    const GridPtr& gp = state.grid_ptr();
    SymTensorField out{ScalarField::from_spectral(gp, std::move(t[2]), "dtau11"),
                       ScalarField::from_spectral(gp, std::move(t[3]), "dtau12"),
                       ScalarField::from_spectral(gp, std::move(t[4]), "dtau22")};
    out.xx.require_finite("rhs_stress");
    out.xy.require_finite("rhs_stress");
    out.yy.require_finite("rhs_stress");
    return out;
}

ScalarField rhs_vorticity(const State& state, const ModelParams& params) {
    const Grid& g = state.grid();
    const ScalarField omega = curl(state.u);
    const ScalarField adv = advect(state.u, omega);
    const ScalarField cd = curl_div(state.tau);
    const RealArray lu = velocity_decay(g, params);
    ComplexArray out(g.spectral_size());
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] = -adv.spectrum()[m] - lu[m] * omega.spectrum()[m] + params.kappa * cd.spectrum()[m];
    return ScalarField::from_spectral(state.grid_ptr(), std::move(out), "domega");
}

ScalarField compute_pressure(const State& state, const ModelParams& params) {
    const Grid& g = state.grid();
    const VectorField& u = state.u;
    const ScalarField uu11 = product(u[0], u[0]);
    const ScalarField uu12 = product(u[0], u[1]);
    const ScalarField uu22 = product(u[1], u[1]);
    const double kap = params.kappa;
    ComplexArray out(g.spectral_size());
    for (std::size_t m = 0; m < out.size(); ++m) {
        const double ksq = g.k_squared()[m];
        if (ksq == 0.0) {
            out[m] = 0.0;
            continue;
        }
        const double a = g.k1()[m];
        const double b = g.k2()[m];
        const Complex s11 = kap * state.tau.xx.spectrum()[m] - uu11.spectrum()[m];
        const Complex s12 = kap * state.tau.xy.spectrum()[m] - uu12.spectrum()[m];
        const Complex s22 = kap * state.tau.yy.spectrum()[m] - uu22.spectrum()[m];
        out[m] = (a * a * s11 + 2.0 * a * b * s12 + b * b * s22) / ksq;
    }
    return ScalarField::from_spectral(state.grid_ptr(), std::move(out), "pi");
}

} // namespace ob2d
