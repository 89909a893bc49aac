#include "ob2d/error.hpp"
#include "ob2d/initial.hpp"
#include "ob2d/norms.hpp"
#include "ob2d/spectral.hpp"
#include "ob2d/timestepper.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>

using namespace ob2d;

namespace {

ScalarField sample(const GridPtr& g, const std::function<double(double, double)>& f) {
    RealArray v(g->physical_size());
    for (int i = 0; i < g->n(); ++i)
        for (int j = 0; j < g->n(); ++j) v[static_cast<std::size_t>(i) * g->n() + j] = f(i * g->dx(), j * g->dx());
    return ScalarField::from_physical(g, std::move(v));
}

bool same_bits(const ScalarField& a, const ScalarField& b) {
    return std::memcmp(a.values().data(), b.values().data(), a.values().size() * sizeof(double)) == 0;
}

State random_state(const GridPtr& g, std::uint64_t seed) {
    InitialConditionConfig ic;
    ic.seed = seed;
    ic.kmax = 5.0;
    return make_initial(ic, g);
}

} // namespace

TEST_CASE("step counting clips only the last step") {
    CHECK(total_steps(0.0, 0.1, 1.0) == 10);
    CHECK(total_steps(0.0, 0.3, 1.0) == 4);
    CHECK(total_steps(0.5, 0.1, 0.5) == 0);
    const Clock c{0.0, 0};
    CHECK(step_time(c, 3, 0.3, 1.0) == doctest::Approx(0.9));
    CHECK(step_time(c, 4, 0.3, 1.0) == 1.0);
}

TEST_CASE("steady shear decays exactly through the integrating factor") {
    const GridPtr g = Grid::create(16);
    ModelParams p;
    p.nu = 0.7;
    p.kappa = 0.0;
    p.gamma_f = 0.0;
    // (sin 2y, 0) has (u.grad)u = 0; the decay rate is nu |k|^2 = 4 nu.
    const State s0{0.0, VectorField{{sample(g, [](double, double y) { return std::sin(2 * y); }), ScalarField::zeros(g)}},
                   SymTensorField::zeros(g)};
    StepperConfig cfg;
    cfg.dt = 0.05;
    cfg.t_end = 1.0;
    const IntegrationResult r = integrate(s0, p, cfg);
    REQUIRE(r.last.status == StepStatus::ok);
    CHECK(r.steps_taken == 20);
    CHECK(r.last.state.time == 1.0);
    const ScalarField expect = std::exp(-4.0 * 0.7) * s0.u[0];
    CHECK(lp_norm(r.last.state.u[0] - expect, infinity) < 1e-14);
    CHECK(lp_norm(r.last.state.tau, infinity) == 0.0);
}

TEST_CASE("fractional stress damping is exact for a single mode") {
    const GridPtr g = Grid::create(16);
    ModelParams p = ModelParams::paper_normalized(0.35);
    p.beta = 0.4;
    p.kappa = 0.0;
    p.gamma_f = 0.0;
    const ScalarField c = sample(g, [](double x, double y) { return std::cos(3 * x + y); });
    const State s0{0.0, VectorField::zeros(g), SymTensorField{c, ScalarField::zeros(g), ScalarField::zeros(g)}};
    StepperConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 0.5;
    const IntegrationResult r = integrate(s0, p, cfg);
    const double rate = 0.4 + std::pow(10.0, 0.35);
    CHECK(lp_norm(r.last.state.tau.xx - std::exp(-rate * 0.5) * c, infinity) < 1e-14);
}

TEST_CASE("integration is deterministic") {
    const GridPtr g = Grid::create(32);
    const State s0 = random_state(g, 11);
    const ModelParams p = ModelParams::paper_normalized(0.5);
    StepperConfig cfg;
    cfg.dt = 5e-3;
    cfg.t_end = 0.1;
    const IntegrationResult a = integrate(s0, p, cfg);
    const IntegrationResult b = integrate(s0, p, cfg);
    CHECK(same_bits(a.last.state.u[0], b.last.state.u[0]));
    CHECK(same_bits(a.last.state.tau.xy, b.last.state.tau.xy));
}

TEST_CASE("fourth-order self-convergence on a coarse grid") {
    const GridPtr g = Grid::create(16);
    const State s0 = random_state(g, 2);
    const ModelParams p = ModelParams::paper_normalized(0.5);
    State q[3];
    const double dts[] = {0.02, 0.01, 0.005};
    for (int i = 0; i < 3; ++i) {
        StepperConfig cfg;
        cfg.dt = dts[i];
        cfg.t_end = 0.2;
        q[i] = integrate(s0, p, cfg).last.state;
    }
    auto d = [](const State& a, const State& b) {
        return lp_norm(combine(1.0, a.u, -1.0, b.u), 2.0) + lp_norm(combine(1.0, a.tau, -1.0, b.tau), 2.0);
    };
    const double slope = std::log2(d(q[0], q[1]) / d(q[1], q[2]));
    CHECK(slope == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("velocity stays solenoidal") {
    const GridPtr g = Grid::create(32);
    const State s0 = random_state(g, 5);
    const StepResult r = step(s0, ModelParams::paper_normalized(0.5), 0.01);
    CHECK(divergence_defect(r.state.u) < 1e-13);
}

TEST_CASE("vorticity threshold reports blow-up") {
    const GridPtr g = Grid::create(16);
    const State s0 = random_state(g, 3);
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.blowup_threshold = 1e-3;
    const IntegrationResult r = integrate(s0, ModelParams{}, cfg);
    CHECK(r.last.status == StepStatus::blowup);
    CHECK(r.steps_taken == 1);
    CHECK(r.failure_time == doctest::Approx(0.01));
}

TEST_CASE("max_steps stops early and observers see every step") {
    const GridPtr g = Grid::create(16);
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.max_steps = 7;
    long seen = 0;
    const IntegrationResult r =
        integrate(random_state(g, 1), ModelParams{}, cfg, [&](const State&, const StepInfo& info) { seen = info.step; });
    CHECK(r.stopped_by_max_steps);
    CHECK(seen == 7);
    CHECK(r.last.state.time == doctest::Approx(0.07));
}

TEST_CASE("stepper configuration is validated") {
    StepperConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = StepperConfig{};
    cfg.cfl_target = 1.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("pure damping reproduces exp(-t)") {
    const GridPtr g = Grid::create(16);
    ModelParams p;
    p.beta = 1.0;
    p.mu = 0.0;
    p.kappa = 0.0;
    p.gamma_f = 0.0;
    const State s0{0.0, VectorField::zeros(g), random_state(g, 4).tau};
    StepperConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 2.0;
    const IntegrationResult r = integrate(s0, p, cfg);
    const SymTensorField expect = combine(std::exp(-2.0), s0.tau, 0.0, s0.tau);
    CHECK(lp_norm(combine(1.0, r.last.state.tau, -1.0, expect), infinity) <= 1e-15 * lp_norm(s0.tau, infinity) * 10);
}

TEST_CASE("zero horizon returns the initial state") {
    const GridPtr g = Grid::create(16);
    const State s0 = random_state(g, 6);
    StepperConfig cfg;
    cfg.t_end = 0.0;
    const IntegrationResult r = integrate(s0, ModelParams{}, cfg);
    CHECK(r.steps_taken == 0);
    CHECK(same_bits(r.last.state.u[0], s0.u[0]));
    CHECK(same_bits(r.last.state.tau.xx, s0.tau.xx));
}
