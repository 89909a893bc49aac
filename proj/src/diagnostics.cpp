#include "ob2d/diagnostics.hpp"

#include "ob2d/error.hpp"
#include "ob2d/format.hpp"
#include "ob2d/kernels.hpp"
#include "ob2d/norms.hpp"
#include "ob2d/spectral.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace ob2d {
namespace {

double quadrature(const Grid& g, const RealArray& f, const RealArray& h) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) lane[i & 3] += f[i] * h[i];
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) * g.cell_area();
}

double l2(const ScalarField& f) { return std::sqrt(spectral_energy(f)); }

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : (num == 0.0 ? 0.0 : num); }

SymTensorField map_tensor(const SymTensorField& t, const std::function<ScalarField(const ScalarField&)>& f) {
    return SymTensorField{f(t.xx), f(t.xy), f(t.yy)};
}

double coupling(const ModelParams& params, const char* who) {
    if (!(params.nu > 0.0)) throw ConfigError(std::string(who) + ": requires nu > 0");
    return params.kappa / params.nu;
}

// Pointwise 2x2 products written out as full matrix loops, independent of the
// stepper's kernels.
using Mat = double[2][2];

void matmul(const Mat a, const Mat b, Mat out) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
}

SymTensorField pointwise_tensor(const SymTensorField& tau, const ScalarField& s11, const ScalarField& s12,
                                const ScalarField& s22, bool antisymmetric_second) {
    const Grid& g = tau.grid();
    const std::size_t n = g.physical_size();
    RealArray o11(n), o12(n), o22(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Mat t{{tau.xx.values()[i], tau.xy.values()[i]}, {tau.xy.values()[i], tau.yy.values()[i]}};
        Mat m;
        if (antisymmetric_second) {
            const double w = s12.values()[i];
            m[0][0] = 0.0;
            m[0][1] = w;
            m[1][0] = -w;
            m[1][1] = 0.0;
        } else {
            m[0][0] = s11.values()[i];
            m[0][1] = s12.values()[i];
            m[1][0] = s12.values()[i];
            m[1][1] = s22.values()[i];
        }
        Mat tm, mt;
        matmul(t, m, tm);
        matmul(m, t, mt);
        // tau M - M tau for skew M, M tau + tau M for symmetric M.
        const double sign = antisymmetric_second ? -1.0 : 1.0;
        o11[i] = tm[0][0] + sign * mt[0][0];
        o12[i] = tm[0][1] + sign * mt[0][1];
        o22[i] = tm[1][1] + sign * mt[1][1];
    }
    const GridPtr& gp = tau.grid_ptr();
    return SymTensorField{dealias(ScalarField::from_physical(gp, std::move(o11))),
                          dealias(ScalarField::from_physical(gp, std::move(o12))),
                          dealias(ScalarField::from_physical(gp, std::move(o22)))};
}

RealArray gradient_magnitude(const std::vector<const ScalarField*>& comps) {
    const std::size_t n = comps.front()->grid().physical_size();
    RealArray mag(n, 0.0);
    for (const ScalarField* c : comps) {
        const RealArray& v = c->values();
        for (std::size_t i = 0; i < n; ++i) mag[i] += v[i] * v[i];
    }
    for (double& x : mag) x = std::sqrt(x);
    return mag;
}

} // namespace

void DiagnosticsConfig::validate() const {
    for (double r : r_list)
        if (!(r > 2.0) || !std::isfinite(r)) throw ConfigError("diagnostics: every r must be finite and > 2");
    for (double s : s_list)
        if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("diagnostics: every s must be finite and >= 0");
    for (const auto& [p, q] : pq_list)
        if (!(p >= 1.0) || !(q >= 1.0) || !std::isfinite(q))
            throw ConfigError("diagnostics: every (p, q) needs p >= 1 and finite q >= 1");
    if (cadence < 1) throw ConfigError("diagnostics: cadence must be >= 1");
}

std::vector<std::string> DiagnosticsRecord::column_names() const {
    std::vector<std::string> out{"time", "step"};
    for (const auto* group : {&norms, &residuals, &accumulators})
        for (const auto& kv : *group) out.push_back(kv.first);
    return out;
}

std::vector<double> DiagnosticsRecord::values() const {
    std::vector<double> out{time, static_cast<double>(step)};
    for (const auto* group : {&norms, &residuals, &accumulators})
        for (const auto& kv : *group) out.push_back(kv.second);
    return out;
}

double DiagnosticsRecord::get(const std::string& name) const {
    if (name == "time") return time;
    if (name == "step") return static_cast<double>(step);
    for (const auto* group : {&norms, &residuals, &accumulators})
        for (const auto& kv : *group)
            if (kv.first == name) return kv.second;
    throw std::out_of_range("diagnostics record has no column '" + name + "'");
}

double energy_balance(const EnergyLedger& ledger) {
    const double r = std::fabs(ledger.residual());
    return ledger.initial_energy > 0.0 ? r / ledger.initial_energy : r;
}

double energy(const State& state, const ModelParams& params) {
    const RealArray ones(state.grid().spectral_size(), 1.0);
    return 0.5 * weighted_state_sum(state.grid(), spectra_of(state), ones, ones, params.energy_weight());
}

double dissipation_rate(const State& state, const ModelParams& params) {
    const Grid& g = state.grid();
    return weighted_state_sum(g, spectra_of(state), velocity_decay(g, params), stress_decay(g, params),
                              params.energy_weight());
}

double cancellation_duality(const VectorField& u, const SymTensorField& tau) {
    const Grid& g = u.grid();
    const VectorField div = divergence(tau);
    const SymTensorField Du = strain_and_rotation(u).strain;
    const double transfer = quadrature(g, div[0].values(), u[0].values()) +
                            quadrature(g, div[1].values(), u[1].values());
    const double work = quadrature(g, Du.xx.values(), tau.xx.values()) +
                        2.0 * quadrature(g, Du.xy.values(), tau.xy.values()) +
                        quadrature(g, Du.yy.values(), tau.yy.values());
    return safe_ratio(transfer + work, lp_norm(u, 2.0) * lp_norm(tau, 2.0));
}

double cancellation_transport(const VectorField& u, const SymTensorField& tau, bool dealias_product) {
    const Grid& g = u.grid();
    const std::array<const ScalarField*, 3> comps{&tau.xx, &tau.xy, &tau.yy};
    const double weight[3] = {1.0, 2.0, 1.0};
    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        const ScalarField& t = *comps[c];
        const ScalarField adv = combine(1.0, product(u[0], partial(t, 0), dealias_product), 1.0,
                                        product(u[1], partial(t, 1), dealias_product));
        total += weight[c] * quadrature(g, adv.values(), t.values());
    }
    const double scale = lp_norm(u, infinity) * sobolev_norm(tau, 1.0, SobolevKind::homogeneous) * lp_norm(tau, 2.0);
    return safe_ratio(total, scale);
}

double cancellation_corotation(const SymTensorField& tau, const SkewTensorField& omega, double r) {
    if (!(r >= 2.0)) throw ConfigError("cancellation_corotation: r must be >= 2");
    const Grid& g = tau.grid();
    const std::size_t n = g.physical_size();
    RealArray c11(n), c12(n), c22(n);
    const double* a = tau.xx.values().data();
    const double* c = tau.xy.values().data();
    const double* d = tau.yy.values().data();
    kernels::active().corotation(c11.data(), c12.data(), c22.data(), a, c, d, omega.xy.values().data(), n);
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double mag = std::sqrt(a[i] * a[i] + 2.0 * c[i] * c[i] + d[i] * d[i]);
        const double wgt = r == 2.0 ? 1.0 : std::pow(mag, r - 2.0);
        lane[i & 3] += (c11[i] * a[i] + 2.0 * c12[i] * c[i] + c22[i] * d[i]) * wgt;
    }
    const double integral = ((lane[0] + lane[1]) + (lane[2] + lane[3])) * g.cell_area();
    const double scale = std::sqrt(2.0) * lp_norm(omega.xy, 2.0) * std::pow(lp_norm(tau, 2.0 * (r - 1.0)), r - 1.0);
    return safe_ratio(integral, scale);
}

ScalarField compute_gamma(const State& state, const ModelParams& params) {
    const double c = coupling(params, "compute_gamma");
    return combine(1.0, curl(state.u), -c, riesz_R(state.tau)).renamed("Gamma");
}

ScalarField compute_G(const State& state, const ModelParams& params, double gamma) {
    const double c = coupling(params, "compute_G");
    return combine(1.0, curl(state.u), -c, riesz_R_gamma(state.tau, gamma)).renamed("G");
}

ScalarField commutator_R(const VectorField& u, const SymTensorField& tau, double gamma) {
    const SymTensorField transported = map_tensor(tau, [&](const ScalarField& f) { return advect(u, f); });
    return riesz_power(transported, gamma) - advect(u, riesz_power(tau, gamma));
}

double commutator_ratio(const VectorField& u, const SymTensorField& tau, double r) {
    if (!(r >= 2.0)) throw ConfigError("commutator_ratio: r must be >= 2");
    const ScalarField comm = commutator_R(u, tau);
    const double num = sobolev_norm(comm, (r - 2.0) / (2.0 * r), SobolevKind::inhomogeneous);
    const double den = sobolev_norm(u, 1.0, SobolevKind::homogeneous) * lp_norm(tau, r) +
                       lp_norm(u, 2.0) * lp_norm(tau, 2.0);
    return safe_ratio(num, den);
}

double gamma_equation_residual(const State& state, const ModelParams& params, const GammaResidualOptions& options) {
    const double c = coupling(params, "gamma_equation_residual");
    const double gamma = params.gamma_u;
    const VectorField& u = state.u;
    const SymTensorField& tau = state.tau;

    // Left side through the model right-hand sides.
    const ScalarField omega = curl(u);
    const ScalarField Gam = combine(1.0, omega, -c, riesz_power(tau, gamma));
    const ScalarField dGamma = combine(1.0, curl(rhs_velocity(state, params)), -c,
                                       riesz_power(rhs_stress(state, params), gamma));
    const ScalarField lhs = dGamma + advect(u, Gam) + params.nu * fractional_laplacian(Gam, 2.0 * gamma);

    // Right side from the closed form.
    const StrainRotation sr = strain_and_rotation(u);
    ScalarField src = ScalarField::zeros(state.grid_ptr());
    if (params.mu != 0.0 && params.alpha > 0.0) {
        const SymTensorField lt = map_tensor(tau, [&](const ScalarField& f) { return fractional_laplacian(f, 2.0 * params.alpha); });
        src = src + params.mu * riesz_power(lt, gamma);
    }
    if (params.beta != 0.0) src = src + params.beta * riesz_power(tau, gamma);
    if (params.gamma_f != 0.0) src = src - params.gamma_f * riesz_power(sr.strain, gamma);
    if (!options.drop_commutator) src = src + commutator_R(u, tau, gamma);
    if (params.eta != 0.0) {
        const SymTensorField cor = pointwise_tensor(tau, sr.rotation.xy, sr.rotation.xy, sr.rotation.xy, true);
        src = src + params.eta * riesz_power(cor, gamma);
    }
    if (params.b != 0.0) {
        const SymTensorField sym = pointwise_tensor(tau, sr.strain.xx, sr.strain.xy, sr.strain.yy, false);
        src = src - params.b * riesz_power(sym, gamma);
    }
    const ScalarField rhs = c * src;
    return safe_ratio(l2(lhs - rhs), l2(rhs));
}

PositivityResult positivity_check(const ScalarField& h, double p, double s) {
    if (!(p >= 2.0)) throw ConfigError("positivity_check: p must be >= 2");
    if (!(s >= 0.0 && s <= 2.0)) throw ConfigError("positivity_check: s must lie in [0, 2]");
    const Grid& g = h.grid();
    const ScalarField ls = fractional_laplacian(h, s);
    RealArray weight(g.physical_size()), power(g.physical_size());
    for (std::size_t i = 0; i < weight.size(); ++i) {
        const double v = h.values()[i];
        const double a = std::fabs(v);
        weight[i] = (p == 2.0 ? 1.0 : std::pow(a, p - 2.0)) * v;
        power[i] = p == 2.0 ? a : std::pow(a, 0.5 * p);
    }
    PositivityResult out;
    out.lhs = quadrature(g, weight, ls.values());
    const ScalarField hp = ScalarField::from_physical(h.grid_ptr(), std::move(power));
    const double half = sobolev_norm(hp, 0.5 * s, SobolevKind::homogeneous);
    out.rhs = 2.0 / p * half * half;
    return out;
}

Monitor::Monitor(ModelParams params, DiagnosticsConfig config) : params_(params), config_(std::move(config)) {
    params_.validate();
    config_.validate();
    coupling(params_, "diagnostics");
    for (double r : config_.r_list) accumulators_.emplace_back("int_omega_L" + short_number(r) + "_pow", 0.0);
    accumulators_.emplace_back("int_grad_Gamma_L2_sq", 0.0);
    for (const auto& [p, q] : config_.pq_list) {
        const std::string tag = "L" + (std::isinf(p) ? std::string("inf") : short_number(p)) + "_q" + short_number(q);
        accumulators_.emplace_back("int_grad_u_" + tag, 0.0);
        accumulators_.emplace_back("int_grad_Gamma_" + tag, 0.0);
    }
    accumulators_.emplace_back("int_lambda_gamma_G_sq", 0.0);
    previous_.assign(accumulators_.size(), 0.0);
}

std::vector<double> Monitor::integrands(const State& s) const {
    const double c = params_.kappa / params_.nu;
    const ScalarField omega = curl(s.u);
    const ScalarField Gam = combine(1.0, omega, -c, riesz_R(s.tau));
    const ScalarField gx = partial(Gam, 0);
    const ScalarField gy = partial(Gam, 1);
    const ScalarField u11 = partial(s.u[0], 0), u12 = partial(s.u[0], 1);
    const ScalarField u21 = partial(s.u[1], 0), u22 = partial(s.u[1], 1);
    const RealArray grad_u = gradient_magnitude({&u11, &u12, &u21, &u22});
    const RealArray grad_gamma = gradient_magnitude({&gx, &gy});

    std::vector<double> out;
    for (double r : config_.r_list) out.push_back(std::pow(lp_norm(omega, r), 2.0 * r / (r - 2.0)));
    const double gg = sobolev_norm(Gam, 1.0, SobolevKind::homogeneous);
    out.push_back(gg * gg);
    for (const auto& [p, q] : config_.pq_list) {
        out.push_back(std::pow(lp_norm_samples(s.grid(), grad_u, p), q));
        out.push_back(std::pow(lp_norm_samples(s.grid(), grad_gamma, p), q));
    }
    const ScalarField G = combine(1.0, omega, -c, riesz_power(s.tau, params_.gamma_u));
    const double lg = sobolev_norm(G, params_.gamma_u, SobolevKind::homogeneous);
    out.push_back(lg * lg);
    return out;
}

void Monitor::start(const State& s0) {
    ledger_.initial_energy = energy(s0, params_);
    ledger_.current_energy = ledger_.initial_energy;
    ledger_.dissipation_integral = 0.0;
    for (auto& kv : accumulators_) kv.second = 0.0;
    previous_ = integrands(s0);
}

void Monitor::advance(const State& s, const StepInfo& info) {
    ledger_.dissipation_integral += info.dissipation_increment;
    ledger_.current_energy = energy(s, params_);
    const std::vector<double> now = integrands(s);
    for (std::size_t i = 0; i < now.size(); ++i) {
        accumulators_[i].second += 0.5 * info.dt * (previous_[i] + now[i]);
        previous_[i] = now[i];
    }
}

std::vector<std::string> Monitor::column_names() const {
    const ScalarField z = ScalarField::zeros(Grid::create(8));
    State probe{0.0, VectorField::zeros(z.grid_ptr()), SymTensorField::zeros(z.grid_ptr())};
    return record(probe, 0).column_names();
}

DiagnosticsRecord Monitor::record(const State& s, long step) const {
    const double c = params_.kappa / params_.nu;
    DiagnosticsRecord rec;
    rec.time = s.time;
    rec.step = step;
    const ScalarField omega = curl(s.u);
    const ScalarField Gam = combine(1.0, omega, -c, riesz_R(s.tau));
    const ScalarField G = combine(1.0, omega, -c, riesz_power(s.tau, params_.gamma_u));
    const StrainRotation sr = strain_and_rotation(s.u);
    auto& n = rec.norms;
    n.emplace_back("u_L2", lp_norm(s.u, 2.0));
    n.emplace_back("tau_L2", lp_norm(s.tau, 2.0));
    n.emplace_back("grad_u_L2", sobolev_norm(s.u, 1.0, SobolevKind::homogeneous));
    n.emplace_back("lambda_alpha_tau_L2", sobolev_norm(s.tau, params_.alpha, SobolevKind::homogeneous));
    n.emplace_back("omega_L2", lp_norm(omega, 2.0));
    n.emplace_back("omega_Linf", lp_norm(omega, infinity));
    n.emplace_back("grad_tau_L2", sobolev_norm(s.tau, 1.0, SobolevKind::homogeneous));
    n.emplace_back("Gamma_L2", lp_norm(Gam, 2.0));
    n.emplace_back("grad_Gamma_L2", sobolev_norm(Gam, 1.0, SobolevKind::homogeneous));
    n.emplace_back("G_L2", lp_norm(G, 2.0));
    n.emplace_back("tau_Linf", lp_norm(s.tau, infinity));
    for (double r : config_.r_list) {
        n.emplace_back("tau_L" + short_number(r), lp_norm(s.tau, r));
        n.emplace_back("omega_L" + short_number(r), lp_norm(omega, r));
    }
    for (double sv : config_.s_list) {
        n.emplace_back("u_H" + short_number(sv), sobolev_norm(s.u, sv, SobolevKind::inhomogeneous));
        n.emplace_back("tau_H" + short_number(sv), sobolev_norm(s.tau, sv, SobolevKind::inhomogeneous));
    }
    n.emplace_back("energy", energy(s, params_));
    n.emplace_back("dissipation_rate", dissipation_rate(s, params_));

    EnergyLedger led = ledger_;
    led.current_energy = energy(s, params_);
    auto& r = rec.residuals;
    r.emplace_back("energy_defect", energy_balance(led));
    r.emplace_back("div_u", divergence_defect(s.u));
    r.emplace_back("duality", cancellation_duality(s.u, s.tau));
    r.emplace_back("corotation_r2", cancellation_corotation(s.tau, sr.rotation, 2.0));
    for (double rv : config_.r_list)
        r.emplace_back("corotation_r" + short_number(rv), cancellation_corotation(s.tau, sr.rotation, rv));
    r.emplace_back("gamma_residual", gamma_equation_residual(s, params_));

    rec.accumulators.emplace_back("dissipation_integral", ledger_.dissipation_integral);
    for (const auto& kv : accumulators_) rec.accumulators.push_back(kv);
    return rec;
}

NamedValues Monitor::save() const {
    NamedValues out{{"initial_energy", ledger_.initial_energy},
                    {"dissipation_integral", ledger_.dissipation_integral},
                    {"current_energy", ledger_.current_energy}};
    for (std::size_t i = 0; i < accumulators_.size(); ++i) {
        out.push_back(accumulators_[i]);
        out.emplace_back("prev:" + accumulators_[i].first, previous_[i]);
    }
    return out;
}

void Monitor::restore(const NamedValues& saved) {
    auto find = [&](const std::string& key) {
        for (const auto& kv : saved)
            if (kv.first == key) return kv.second;
        throw ConfigError("monitor state is missing '" + key + "'; the checkpoint was written with a different diagnostics configuration");
    };
    ledger_.initial_energy = find("initial_energy");
    ledger_.dissipation_integral = find("dissipation_integral");
    ledger_.current_energy = find("current_energy");
    for (std::size_t i = 0; i < accumulators_.size(); ++i) {
        accumulators_[i].second = find(accumulators_[i].first);
        previous_[i] = find("prev:" + accumulators_[i].first);
    }
}

} // namespace ob2d
