#include "ob2d/experiments.hpp"

#include "ob2d/error.hpp"
#include "ob2d/format.hpp"
#include "ob2d/initial.hpp"
#include "ob2d/io.hpp"
#include "ob2d/norms.hpp"
#include "ob2d/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <thread>

namespace ob2d {
namespace {

const std::vector<std::string> default_metrics{"u_L2",     "tau_L2", "grad_tau_L2",  "omega_Linf",
                                               "tau_Linf", "G_L2",   "energy_defect"};

unsigned thread_cap() {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("OB2D_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) cap = static_cast<unsigned>(v);
    }
    return cap;
}

SweepRow summarize(double value, const RunOutcome& run, const std::vector<std::string>& metrics) {
    SweepRow row;
    row.value = value;
    row.status = run.status;
    row.error = run.status == StepStatus::ok ? std::string() : run.message;
    row.steps = run.last_step;
    row.final_time = run.final_time;
    if (run.rows.empty()) return row;
    const DiagnosticsRecord& last = run.rows.back();
    std::vector<double> times;
    for (const auto& r : run.rows) times.push_back(r.time);
    auto series = [&](const std::string& name) {
        std::vector<double> v;
        for (const auto& r : run.rows) v.push_back(r.get(name));
        return v;
    };
    for (const auto& m : metrics) {
        const std::vector<double> v = series(m);
        row.terminal.emplace_back(m, v.back());
        row.peak.emplace_back(m, *std::max_element(v.begin(), v.end()));
        row.plateau.emplace_back(m, plateaus(times, v) ? 1.0 : 0.0);
    }
    for (const auto& [name, value_] : last.accumulators) {
        row.accumulators.emplace_back(name, value_);
        row.plateau.emplace_back(name, plateaus(times, series(name)) ? 1.0 : 0.0);
    }
    return row;
}

void write_summary(const std::string& path, SweepAxis axis, const std::vector<SweepRow>& rows,
                   const std::vector<std::string>& metrics) {
    const SweepRow* ref = nullptr;
    for (const auto& r : rows)
        if (!r.terminal.empty()) {
            ref = &r;
            break;
        }
    std::ofstream out(path);
    if (!out) throw IoError("cannot create sweep summary '" + path + "'");
    out << to_string(axis) << ",status,steps,final_time";
    for (const auto& m : metrics) out << ",terminal_" << m;
    for (const auto& m : metrics) out << ",peak_" << m;
    if (ref != nullptr) {
        for (const auto& kv : ref->accumulators) out << ',' << kv.first;
        for (const auto& kv : ref->plateau) out << ",plateau_" << kv.first;
    }
    out << ",error\n";
    for (const auto& r : rows) {
        const bool have = !r.terminal.empty();
        out << format_csv_number(r.value) << ',' << (!have && !r.error.empty() ? "error" : to_string(r.status));
        out << ',' << r.steps << ',' << format_csv_number(r.final_time);
        for (std::size_t i = 0; i < metrics.size(); ++i) out << ',' << (have ? format_csv_number(r.terminal[i].second) : "");
        for (std::size_t i = 0; i < metrics.size(); ++i) out << ',' << (have ? format_csv_number(r.peak[i].second) : "");
        if (ref != nullptr) {
            for (std::size_t i = 0; i < ref->accumulators.size(); ++i)
                out << ',' << (have ? format_csv_number(r.accumulators[i].second) : "");
            for (std::size_t i = 0; i < ref->plateau.size(); ++i)
                out << ',' << (have ? std::to_string(static_cast<int>(r.plateau[i].second)) : "");
        }
        std::string err = r.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << ',' << err << '\n';
    }
    if (!out) throw IoError("write failed for sweep summary '" + path + "'");
}

double gronwall_integrand(const State& base, const State& pert) {
    auto grad_inf = [](const std::vector<const ScalarField*>& comps, const std::vector<double>& weights) {
        const std::size_t n = comps.front()->grid().physical_size();
        std::vector<ScalarField> d;
        for (const ScalarField* c : comps) {
            d.push_back(partial(*c, 0));
            d.push_back(partial(*c, 1));
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t c = 0; c < d.size(); ++c) s += weights[c / 2] * d[c].values()[i] * d[c].values()[i];
            worst = std::max(worst, s);
        }
        return std::sqrt(worst);
    };
    const double gu = grad_inf({&pert.u[0], &pert.u[1]}, {1.0, 1.0});
    const double gt = grad_inf({&pert.tau.xx, &pert.tau.xy, &pert.tau.yy}, {1.0, 2.0, 1.0});
    const double tb = lp_norm(base.tau, infinity);
    const double tp = lp_norm(pert.tau, infinity);
    return gu + gt + tb * tb + tp * tp;
}

} // namespace

SweepAxis parse_axis(const std::string& name) {
    if (name == "alpha") return SweepAxis::alpha;
    if (name == "gamma_u") return SweepAxis::gamma_u;
    if (name == "eta") return SweepAxis::eta;
    if (name == "b") return SweepAxis::b;
    if (name == "resolution") return SweepAxis::resolution;
    throw ConfigError("unknown sweep axis '" + name + "' (expected alpha, gamma_u, eta, b or resolution)");
}

const char* to_string(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::gamma_u: return "gamma_u";
    case SweepAxis::eta: return "eta";
    case SweepAxis::b: return "b";
    case SweepAxis::resolution: return "resolution";
    }
    return "unknown";
}

void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep: no values given");
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("sweep: values must be finite");
        switch (axis) {
        case SweepAxis::alpha:
            if (v < 0.0) throw ConfigError("sweep: alpha values must be >= 0");
            break;
        case SweepAxis::gamma_u:
            if (!(v > 1.0)) throw ConfigError("sweep: gamma_u values must exceed 1");
            break;
        case SweepAxis::b:
            if (std::fabs(v) > 1.0) throw ConfigError("sweep: b values must lie in [-1, 1]");
            break;
        case SweepAxis::eta:
            break;
        case SweepAxis::resolution:
            if (v != std::floor(v) || v < 8 || static_cast<long>(v) % 2 != 0)
                throw ConfigError("sweep: resolution values must be even integers >= 8");
            break;
        }
    }
    base.validate();
}

RunConfig sweep_point(const RunConfig& base, SweepAxis axis, double value) {
    RunConfig cfg = base;
    switch (axis) {
    case SweepAxis::alpha: cfg.params.alpha = value; break;
    case SweepAxis::gamma_u: cfg.params.gamma_u = value; break;
    case SweepAxis::eta: cfg.params.eta = value; break;
    case SweepAxis::b: cfg.params.b = value; break;
    case SweepAxis::resolution: cfg.grid.n = static_cast<int>(value); break;
    }
    return cfg;
}

std::string sweep_point_dir(SweepAxis axis, double value) {
    return std::string(to_string(axis)) + "=" + short_number(value);
}

bool plateaus(const std::vector<double>& times, const std::vector<double>& values, double tail_fraction,
              double ratio) {
    if (times.size() != values.size() || times.size() < 2) return true;
    const double t0 = times.front();
    const double t1 = times.back();
    const double cut = t1 - tail_fraction * (t1 - t0);
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double dv = std::fabs(values[i] - values[i - 1]);
        total += dv;
        if (times[i - 1] >= cut) tail += dv;
    }
    if (total == 0.0) return true;
    return tail < ratio * tail_fraction * total;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::vector<std::string>& metrics = spec.summary_metrics.empty() ? default_metrics : spec.summary_metrics;
    if (!spec.out_dir.empty()) ensure_directory(spec.out_dir);
    std::vector<SweepRow> rows(spec.values.size());

    auto run_point = [&](std::size_t i) {
        const double value = spec.values[i];
        const auto start = std::chrono::steady_clock::now();
        try {
            const RunConfig cfg = sweep_point(spec.base, spec.axis, value);
            RunOptions opts;
            if (!spec.out_dir.empty()) opts.out_dir = spec.out_dir + "/" + sweep_point_dir(spec.axis, value);
            rows[i] = summarize(value, run_simulation(cfg, opts), metrics);
        } catch (const std::exception& e) {
            rows[i] = SweepRow{};
            rows[i].value = value;
            rows[i].status = StepStatus::nonfinite;
            rows[i].error = e.what();
        }
        rows[i].wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    const unsigned workers = spec.parallel ? std::min<unsigned>(thread_cap(), static_cast<unsigned>(rows.size())) : 1u;
    if (workers <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) run_point(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < rows.size(); i = next++) run_point(i);
            });
        for (auto& t : pool) t.join();
    }

    if (!spec.out_dir.empty()) {
        write_summary(spec.out_dir + "/summary.csv", spec.axis, rows, metrics);
        std::ofstream t(spec.out_dir + "/timings.csv");
        t << to_string(spec.axis) << ",wall_seconds\n";
        for (const auto& r : rows) t << format_csv_number(r.value) << ',' << format_csv_number(r.wall_seconds) << '\n';
    }
    return rows;
}

TwinResult run_twin(const RunConfig& cfg, const TwinSpec& spec, const std::string& out_dir) {
    cfg.validate();
    if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) throw ConfigError("twin: delta must be >= 0");
    if (spec.norm_cadence < 1) throw ConfigError("twin: norm_cadence must be >= 1");
    const GridPtr grid = Grid::create(cfg.grid.n, cfg.grid.length);
    const State base0 = make_initial(cfg.initial, grid);
    const double u0 = lp_norm(base0.u, 2.0);
    if (spec.delta > 1e-2 * u0) throw ConfigError("twin: delta must not exceed 1e-2 * ||u0||_L2");

    const bool tg = cfg.initial.kind == InitialKind::taylor_green;
    const double kmin = tg ? 1.0 : cfg.initial.kmin;
    const double kmax = tg ? std::min(4.0, static_cast<double>(grid->dealias_cutoff())) : cfg.initial.kmax;
    const State p = make_perturbation(grid, spec.perturbation_seed, kmin, kmax);
    State pert0{0.0, combine(1.0, base0.u, spec.delta, p.u), combine(1.0, base0.tau, spec.delta, p.tau)};

    std::unique_ptr<LedgerWriter> ledger;
    if (!out_dir.empty()) {
        ensure_directory(out_dir);
        ledger = std::make_unique<LedgerWriter>(out_dir + "/twin.csv",
                                                std::vector<std::string>{"time", "V_L2", "W_L2", "gronwall_integral", "ratio"});
        std::ofstream(out_dir + "/config.json") << serialize_config(cfg);
    }

    TwinResult out;
    double integral = 0.0;
    auto make_row = [&](const State& a, const State& b) {
        const VectorField V = combine(1.0, b.u, -1.0, a.u);
        const SymTensorField W = combine(1.0, b.tau, -1.0, a.tau);
        TwinRow r;
        r.time = a.time;
        r.V_L2 = std::sqrt(spectral_energy(V[0]) + spectral_energy(V[1]));
        r.W_L2 = std::sqrt(spectral_energy(W.xx) + 2.0 * spectral_energy(W.xy) + spectral_energy(W.yy));
        r.gronwall_integral = integral;
        const double d2 = spec.delta * spec.delta;
        r.ratio = d2 > 0.0 ? (r.V_L2 * r.V_L2 + r.W_L2 * r.W_L2) / (d2 * std::exp(integral)) : 0.0;
        return r;
    };
    auto emit = [&](const TwinRow& r) {
        out.rows.push_back(r);
        out.max_ratio = std::max(out.max_ratio, r.ratio);
        out.terminal = r;
        if (ledger) ledger->write({r.time, r.V_L2, r.W_L2, r.gronwall_integral, r.ratio});
    };

    cfg.stepper.validate();
    Stepper sa(grid, cfg.params);
    Stepper sb(grid, cfg.params);
    State a = base0;
    State b = pert0;
    double g_prev = gronwall_integrand(a, b);
    emit(make_row(a, b));

    const Clock clock{0.0, 0};
    const long total = total_steps(0.0, cfg.stepper.dt, cfg.stepper.t_end);
    const long limit = cfg.stepper.max_steps > 0 ? std::min(total, cfg.stepper.max_steps) : total;
    for (long k = 1; k <= limit; ++k) {
        const double t_prev = step_time(clock, k - 1, cfg.stepper.dt, cfg.stepper.t_end);
        const double t_next = step_time(clock, k, cfg.stepper.dt, cfg.stepper.t_end);
        double h = k < total ? cfg.stepper.dt : t_next - t_prev;
        if (std::fabs(h - cfg.stepper.dt) <= 1e-12 * cfg.stepper.dt) h = cfg.stepper.dt;
        StepResult ra = sa.step(a, h, cfg.stepper.blowup_threshold);
        StepResult rb = sb.step(b, h, cfg.stepper.blowup_threshold);
        if (ra.status != StepStatus::ok || rb.status != StepStatus::ok) {
            out.status = ra.status != StepStatus::ok ? ra.status : rb.status;
            out.message = std::string(ra.status != StepStatus::ok ? "base" : "perturbed") + " run: status " +
                          to_string(out.status) + " at t = " + short_number(t_next);
            return out;
        }
        a = std::move(ra.state);
        b = std::move(rb.state);
        a.time = t_next;
        b.time = t_next;
        const double g_now = gronwall_integrand(a, b);
        integral += 0.5 * h * (g_prev + g_now);
        g_prev = g_now;
        if (k % spec.norm_cadence == 0 || k == limit) emit(make_row(a, b));
    }
    return out;
}

} // namespace ob2d
