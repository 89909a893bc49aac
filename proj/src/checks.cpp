#include "ob2d/checks.hpp"

#include "ob2d/config.hpp"
#include "ob2d/diagnostics.hpp"
#include "ob2d/experiments.hpp"
#include "ob2d/initial.hpp"
#include "ob2d/io.hpp"
#include "ob2d/norms.hpp"
#include "ob2d/simulation.hpp"
#include "ob2d/spectral.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

namespace ob2d {
namespace {

using Clock_ = std::chrono::steady_clock;

double seconds_since(Clock_::time_point t0) {
    return std::chrono::duration<double>(Clock_::now() - t0).count();
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
    char buf[1024];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

struct Sizes {
    int ac1_n, ac2_n, ac3_n, ac4_n, ac5_n, ac7_n, ac8_n, ac9_n, ac10_n, ac11_n;
    double ac1_t, ac5_t, ac7_t, ac8_t, ac9_t;
    int ac2_states, ac3_states, ac4_fields, ac10_fields;
};

constexpr Sizes full_sizes{128, 64, 64, 64, 64, 128, 128, 64, 64, 64, 1.0, 0.5, 5.0, 5.0, 1.0, 50, 20, 100, 50};
constexpr Sizes quick_sizes{64, 32, 32, 32, 32, 32, 32, 32, 32, 32, 0.5, 0.25, 5.0, 5.0, 0.5, 10, 5, 20, 20};

// AC1 step; halved for the order check.
constexpr double energy_dt = 5e-3;
constexpr double regime_dt = 5e-3;
constexpr double twin_dt = 2e-3;

RunConfig random_run(int n, const ModelParams& params, double t_end, double dt, std::uint64_t seed = 42) {
    RunConfig cfg;
    cfg.grid.n = n;
    cfg.params = params;
    cfg.stepper.dt = dt;
    cfg.stepper.t_end = t_end;
    cfg.initial.kind = InitialKind::random_bandlimited;
    cfg.initial.seed = seed;
    cfg.initial.amplitude = 1.0;
    cfg.initial.kmin = 1.0;
    cfg.initial.kmax = std::min(8.0, static_cast<double>(n / 3));
    cfg.initial.tau_kind = TauKind::random_symmetric;
    return cfg;
}

State random_state(const GridPtr& grid, std::uint64_t seed, double kmax) {
    InitialConditionConfig ic;
    ic.kind = InitialKind::random_bandlimited;
    ic.seed = seed;
    ic.kmin = 1.0;
    ic.kmax = kmax;
    ic.tau_kind = TauKind::random_symmetric;
    return make_initial(ic, grid);
}

double state_distance(const State& a, const State& b) {
    const VectorField du = combine(1.0, a.u, -1.0, b.u);
    const SymTensorField dt = combine(1.0, a.tau, -1.0, b.tau);
    return std::sqrt(spectral_energy(du[0]) + spectral_energy(du[1]) + spectral_energy(dt.xx) +
                     2.0 * spectral_energy(dt.xy) + spectral_energy(dt.yy));
}

std::string temp_dir(const std::string& tag) {
    const auto base = std::filesystem::temp_directory_path() /
                      ("ob2d_check_" + tag + "_" + std::to_string(Clock_::now().time_since_epoch().count()));
    std::filesystem::create_directories(base);
    return base.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

CheckOutcome energy_identity(const Sizes& z) {
    CheckOutcome out{"AC1", "energy identity", false, {}, 0.0};
    const ModelParams params = ModelParams::paper_normalized(0.1);
    RunOptions opts;
    opts.keep_rows = false;
    const auto t0 = Clock_::now();
    const RunOutcome a = run_simulation(random_run(z.ac1_n, params, z.ac1_t, energy_dt), opts);
    const double run_seconds = seconds_since(t0);
    const RunOutcome b = run_simulation(random_run(z.ac1_n, params, z.ac1_t, energy_dt / 2), opts);
    const double d1 = energy_balance(a.energy);
    const double d2 = energy_balance(b.energy);
    const double ratio = d1 / d2;
    out.passed = a.status == StepStatus::ok && b.status == StepStatus::ok && d1 <= 1e-6 && ratio >= 8.0 &&
                 run_seconds <= 120.0;
    out.detail = fmt("N=%d dt=%g defect=%.3e, dt/2 defect=%.3e, ratio=%.2f (>= 8), run %.1f s (<= 120)", z.ac1_n,
                     energy_dt, d1, d2, ratio, run_seconds);
    return out;
}

CheckOutcome cancellation(const Sizes& z) {
    CheckOutcome out{"AC2", "cancellation identities", false, {}, 0.0};
    const GridPtr grid = Grid::create(z.ac2_n);
    const double kmax = grid->dealias_cutoff();
    double dual = 0.0, c2 = 0.0, c4 = 0.0;
    for (int i = 0; i < z.ac2_states; ++i) {
        const State s = random_state(grid, 1000 + i, kmax);
        const StrainRotation sr = strain_and_rotation(s.u);
        dual = std::max(dual, std::fabs(cancellation_duality(s.u, s.tau)));
        c2 = std::max(c2, std::fabs(cancellation_corotation(s.tau, sr.rotation, 2.0)));
        c4 = std::max(c4, std::fabs(cancellation_corotation(s.tau, sr.rotation, 4.0)));
    }
    out.passed = dual <= 1e-10 && c2 <= 1e-10 && c4 <= 1e-10;
    out.detail = fmt("%d states N=%d: max duality %.3e, corotation r=2 %.3e, r=4 %.3e (<= 1e-10)", z.ac2_states,
                     z.ac2_n, dual, c2, c4);
    return out;
}

CheckOutcome gamma_consistency(const Sizes& z) {
    CheckOutcome out{"AC3", "Gamma-equation consistency", false, {}, 0.0};
    const GridPtr grid = Grid::create(z.ac3_n);
    double worst = 0.0;
    double mutated = infinity;
    for (int i = 0; i < z.ac3_states; ++i) {
        ModelParams p = ModelParams::paper_normalized(0.5);
        // Cycle through couplings so every source term is exercised.
        if (i % 2 == 1) {
            p.beta = 0.3;
            p.b = 0.4;
            p.kappa = 0.7;
            p.gamma_f = 1.3;
        }
        if (i % 4 == 3) p.gamma_u = 1.25;
        const State s = random_state(grid, 2000 + i, 8.0);
        worst = std::max(worst, gamma_equation_residual(s, p));
        GammaResidualOptions drop;
        drop.drop_commutator = true;
        mutated = std::min(mutated, gamma_equation_residual(s, p, drop));
    }
    out.passed = worst <= 1e-10 && mutated > 1e-2;
    out.detail = fmt("%d states N=%d: max residual %.3e (<= 1e-10), min mutated residual %.3e (> 1e-2)",
                     z.ac3_states, z.ac3_n, worst, mutated);
    return out;
}

CheckOutcome positivity(const Sizes& z) {
    CheckOutcome out{"AC4", "positivity inequality", false, {}, 0.0};
    const GridPtr grid = Grid::create(z.ac4_n);
    const double ps[] = {2.0, 4.0, 6.0};
    const double ss[] = {0.5, 1.0, 1.6};
    double worst_gap = -infinity; // max of (rhs - lhs) / |lhs|; must stay <= 1e-8
    double worst_eq = 0.0;        // p = 2 on nonnegative fields
    double signed_p2 = -infinity; // p = 2 on signed fields, reported only
    for (int i = 0; i < z.ac4_fields; ++i) {
        const ScalarField h = random_bandlimited_field(grid, 3000 + i, 1.0, 8.0);
        const RealArray& v = h.values();
        const double lo = *std::min_element(v.begin(), v.end());
        const ScalarField hp = combine(1.0, h, 1.0, ScalarField::from_physical(grid, RealArray(v.size(), 0.1 - lo)));
        for (double p : ps)
            for (double s : ss) {
                const PositivityResult r = positivity_check(h, p, s);
                worst_gap = std::max(worst_gap, (r.rhs - r.lhs) / std::fabs(r.lhs));
                if (p == 2.0) {
                    signed_p2 = std::max(signed_p2, (r.lhs - r.rhs) / std::fabs(r.lhs));
                    const PositivityResult e = positivity_check(hp, p, s);
                    worst_eq = std::max(worst_eq, std::fabs(e.lhs - e.rhs) / std::fabs(e.lhs));
                }
            }
    }
    out.passed = worst_gap <= 1e-8 && worst_eq <= 1e-12;
    out.detail = fmt("%d fields N=%d: max (rhs-lhs)/|lhs| %.3e (<= 1e-8), p=2 equality %.3e (<= 1e-12, "
                     "nonnegative fields; signed fields gap %.3e)",
                     z.ac4_fields, z.ac4_n, worst_gap, worst_eq, signed_p2);
    return out;
}

CheckOutcome temporal_order(const Sizes& z) {
    CheckOutcome out{"AC5", "temporal order", false, {}, 0.0};
    const ModelParams params = ModelParams::paper_normalized(0.5);
    // Last entry is the dt/8 reference.
    const double dts[] = {2e-3, 1e-3, 5e-4, 5e-4 / 8};
    State finals[4];
    for (int i = 0; i < 4; ++i) {
        RunConfig cfg = random_run(z.ac5_n, params, z.ac5_t, dts[i]);
        const IntegrationResult r =
            integrate(make_initial(cfg.initial, Grid::create(cfg.grid.n)), cfg.params, cfg.stepper);
        if (r.last.status != StepStatus::ok) {
            out.detail = "run failed: " + r.message;
            return out;
        }
        finals[i] = r.last.state;
    }
    double lx[3], ly[3];
    for (int i = 0; i < 3; ++i) {
        lx[i] = std::log(dts[i]);
        ly[i] = std::log(state_distance(finals[i], finals[3]));
    }
    const double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    const double three_level =
        std::log2(state_distance(finals[0], finals[1]) / state_distance(finals[1], finals[2]));
    out.passed = std::fabs(slope - 4.0) <= 0.2;
    out.detail = fmt("N=%d T=%g: errors vs dt/8 reference %.3e %.3e %.3e, fitted slope %.3f (4 +- 0.2), "
                     "three-level slope %.3f",
                     z.ac5_n, z.ac5_t, std::exp(ly[0]), std::exp(ly[1]), std::exp(ly[2]), slope, three_level);
    return out;
}

CheckOutcome taylor_green() {
    CheckOutcome out{"AC6", "Taylor-Green oracle", false, {}, 0.0};
    RunConfig cfg;
    cfg.grid.n = 32;
    cfg.params = ModelParams::paper_normalized(0.5);
    cfg.params.kappa = 0.0;
    cfg.initial.kind = InitialKind::taylor_green;
    cfg.initial.tau_kind = TauKind::zero;
    cfg.stepper.dt = 1e-2;
    cfg.stepper.t_end = 1.0;
    const GridPtr grid = Grid::create(cfg.grid.n);
    const IntegrationResult r = integrate(make_initial(cfg.initial, grid), cfg.params, cfg.stepper);
    if (r.last.status != StepStatus::ok) {
        out.detail = "run failed: " + r.message;
        return out;
    }
    const double ksq = 2.0 * grid->k0() * grid->k0();
    const double decay = std::exp(-cfg.params.nu * std::pow(ksq, cfg.params.gamma_u) * cfg.stepper.t_end);
    double err = 0.0;
    const int n = grid->n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = grid->k0() * i * grid->dx();
            const double y = grid->k0() * j * grid->dx();
            const double u1 = decay * std::sin(x) * std::cos(y);
            const double u2 = -decay * std::cos(x) * std::sin(y);
            err = std::max({err, std::fabs(r.last.state.u[0].at(i, j) - u1), std::fabs(r.last.state.u[1].at(i, j) - u2)});
        }
    out.passed = err <= 1e-8;
    out.detail = fmt("N=32 T=1 dt=%g: max |u - u_exact| %.3e (<= 1e-8)", cfg.stepper.dt, err);
    return out;
}

CheckOutcome regime_alpha(const Sizes& z) {
    CheckOutcome out{"AC7", "stress-dissipation regime probe", true, {}, 0.0};
    for (double alpha : {0.2, 0.5, 1.0}) {
        const RunOutcome r = run_simulation(random_run(z.ac7_n, ModelParams::paper_normalized(alpha), z.ac7_t, regime_dt));
        std::vector<double> t, g, a;
        for (const auto& row : r.rows) {
            t.push_back(row.time);
            g.push_back(row.get("grad_tau_L2"));
            a.push_back(row.get("int_grad_Gamma_L2_sq"));
        }
        const bool ok = r.status == StepStatus::ok;
        const bool pg = ok && plateaus(t, g);
        const bool pa = ok && plateaus(t, a);
        out.passed = out.passed && ok && pg && pa;
        out.detail += fmt("%salpha=%g %s grad_tau %s int_grad_Gamma %s", out.detail.empty() ? "" : "; ", alpha,
                          to_string(r.status), pg ? "plateau" : "NO-plateau", pa ? "plateau" : "NO-plateau");
    }
    out.detail = fmt("N=%d T=%g: ", z.ac7_n, z.ac7_t) + out.detail;
    return out;
}

CheckOutcome regime_gamma(const Sizes& z) {
    CheckOutcome out{"AC8", "velocity-dissipation regime probe", true, {}, 0.0};
    for (double gamma : {1.1, 1.25}) {
        const RunConfig cfg = random_run(z.ac8_n, ModelParams::generalized_dissipation(gamma), z.ac8_t, regime_dt);
        const RunOutcome r = run_simulation(cfg);
        double g_peak = 0.0, t_peak = 0.0;
        bool finite = true;
        for (const auto& row : r.rows) {
            const double g = row.get("G_L2");
            const double t = row.get("tau_Linf");
            finite = finite && std::isfinite(g) && std::isfinite(t);
            g_peak = std::max(g_peak, g);
            t_peak = std::max(t_peak, t);
        }
        const bool bounded = finite && g_peak < cfg.stepper.blowup_threshold && t_peak < cfg.stepper.blowup_threshold;
        out.passed = out.passed && r.status == StepStatus::ok && bounded;
        out.detail += fmt("%sgamma_u=%g %s peak G_L2 %.3e, peak tau_Linf %.3e", out.detail.empty() ? "" : "; ", gamma,
                          to_string(r.status), g_peak, t_peak);
    }
    out.detail = fmt("N=%d T=%g mu=0: ", z.ac8_n, z.ac8_t) + out.detail;
    return out;
}

CheckOutcome gronwall(const Sizes& z) {
    CheckOutcome out{"AC9", "uniqueness and Gronwall", false, {}, 0.0};
    const RunConfig cfg = random_run(z.ac9_n, ModelParams::paper_normalized(0.5), z.ac9_t, twin_dt);
    const double deltas[] = {1e-6, 1e-5, 1e-4};
    double lx[3], ly[3];
    double max_ratio = 0.0;
    for (int i = 0; i < 3; ++i) {
        TwinSpec spec;
        spec.delta = deltas[i];
        const TwinResult r = run_twin(cfg, spec);
        if (r.status != StepStatus::ok) {
            out.detail = "twin failed: " + r.message;
            return out;
        }
        lx[i] = std::log(deltas[i]);
        ly[i] = 0.5 * std::log(r.terminal.V_L2 * r.terminal.V_L2 + r.terminal.W_L2 * r.terminal.W_L2);
        max_ratio = std::max(max_ratio, r.max_ratio);
    }
    const double mx = (lx[0] + lx[1] + lx[2]) / 3.0;
    const double my = (ly[0] + ly[1] + ly[2]) / 3.0;
    double sxy = 0.0, sxx = 0.0;
    for (int i = 0; i < 3; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    out.passed = std::fabs(slope - 1.0) <= 0.1 && max_ratio <= 10.0;
    out.detail = fmt("N=%d T=%g: terminal difference slope %.4f (1 +- 0.1), max Gronwall ratio %.3e (<= 10)",
                     z.ac9_n, z.ac9_t, slope, max_ratio);
    return out;
}

CheckOutcome besov_embedding(const Sizes& z) {
    CheckOutcome out{"AC10", "Besov embedding monitor", false, {}, 0.0};
    const GridPtr grid = Grid::create(z.ac10_n);
    const double p = 4.0;
    const double s = 1.1 * (2.0 / p);
    double lo = infinity, hi = 0.0;
    bool finite = true;
    for (int i = 0; i < z.ac10_fields; ++i) {
        const ScalarField f = random_bandlimited_field(grid, 4000 + i, 1.0, grid->dealias_cutoff());
        const double ratio = besov_norm(f, s, 2.0) / lp_norm(f, p);
        finite = finite && std::isfinite(ratio) && ratio > 0.0;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    out.passed = finite && hi / lo < 100.0;
    out.detail = fmt("%d fields N=%d s=%.2f p=4: ratio in [%.3e, %.3e], max/min %.3f (< 100)", z.ac10_fields,
                     z.ac10_n, s, lo, hi, hi / lo);
    return out;
}

CheckOutcome infrastructure(const Sizes& z, Clock_::time_point suite_start) {
    CheckOutcome out{"AC11", "infrastructure", false, {}, 0.0};
    const std::string root = temp_dir("ac11");

    RunConfig cfg = random_run(z.ac11_n, ModelParams::paper_normalized(0.5), 0.2, 2e-3);
    cfg.diagnostics.cadence = 10;
    cfg.output.checkpoint_every = 50;
    RunOptions whole;
    whole.out_dir = root + "/whole";
    run_simulation(cfg, whole);

    RunConfig first = cfg;
    first.stepper.max_steps = 50;
    RunOptions split;
    split.out_dir = root + "/split";
    run_simulation(first, split);
    split.restart = true;
    run_simulation(cfg, split);
    const std::string la = slurp(whole.out_dir + "/" + ledger_file);
    const bool restart_ok = !la.empty() && la == slurp(split.out_dir + "/" + ledger_file);

    RunConfig other = cfg;
    other.params.b = 0.25;
    other.initial.seed = 9;
    other.diagnostics.r_list = {3.0, 6.0};
    const std::string c1 = serialize_config(other);
    const bool config_ok = serialize_config(parse_config(c1)) == c1 && serialize_config(parse_config(c1)) != serialize_config(cfg);

    const GridPtr grid = Grid::create(z.ac11_n);
    const Snapshot snap = make_snapshot(random_state(grid, 5, 6.0), cfg.params);
    const std::string path = root + "/snap.ob2d";
    write_snapshot(path, snap);
    const Snapshot back = read_snapshot(path);
    const std::uintmax_t size = std::filesystem::file_size(path);
    const std::uintmax_t expect = snapshot_header_bytes + 5u * snap.n * snap.n * 8u;
    const bool snapshot_ok = back.fields == snap.fields && back.time == snap.time && back.n == snap.n && size == expect;

    std::filesystem::remove_all(root);
    const double suite = seconds_since(suite_start);
    out.passed = restart_ok && config_ok && snapshot_ok && suite <= 600.0;
    out.detail = fmt("restart ledgers %s, config round trip %s, snapshot round trip %s, suite %.1f s (<= 600)",
                     restart_ok ? "identical" : "DIFFER", config_ok ? "ok" : "FAILED",
                     snapshot_ok ? "bit-exact" : "FAILED", suite);
    return out;
}

} // namespace

std::vector<CheckOutcome> run_acceptance(CheckLevel level, const CheckCallback& on_result) {
    const Sizes& z = level == CheckLevel::full ? full_sizes : quick_sizes;
    const auto start = Clock_::now();
    std::vector<CheckOutcome> results;
    auto run = [&](const char* id, const char* title, const std::function<CheckOutcome()>& fn) {
        const auto t0 = Clock_::now();
        CheckOutcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = CheckOutcome{id, title, false, std::string("exception: ") + e.what(), 0.0};
        }
        o.seconds = seconds_since(t0);
        if (on_result) on_result(o);
        results.push_back(std::move(o));
    };
    run("AC1", "energy identity", [&] { return energy_identity(z); });
    run("AC2", "cancellation identities", [&] { return cancellation(z); });
    run("AC3", "Gamma-equation consistency", [&] { return gamma_consistency(z); });
    run("AC4", "positivity inequality", [&] { return positivity(z); });
    run("AC5", "temporal order", [&] { return temporal_order(z); });
    run("AC6", "Taylor-Green oracle", [&] { return taylor_green(); });
    run("AC7", "stress-dissipation regime probe", [&] { return regime_alpha(z); });
    run("AC8", "velocity-dissipation regime probe", [&] { return regime_gamma(z); });
    run("AC9", "uniqueness and Gronwall", [&] { return gronwall(z); });
    run("AC10", "Besov embedding monitor", [&] { return besov_embedding(z); });
    run("AC11", "infrastructure", [&] { return infrastructure(z, start); });
    return results;
}

std::string format_outcome(const CheckOutcome& o) {
    return fmt("%s %-4s %s: %s (%.1f s)", o.passed ? "PASS" : "FAIL", o.id.c_str(), o.title.c_str(),
               o.detail.c_str(), o.seconds);
}

} // namespace ob2d
