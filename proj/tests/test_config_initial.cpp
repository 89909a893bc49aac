#include "ob2d/config.hpp"
#include "ob2d/error.hpp"
#include "ob2d/initial.hpp"
#include "ob2d/norms.hpp"
#include "ob2d/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace ob2d;

TEST_CASE("empty document gives defaults") {
    const RunConfig c = parse_config("{}");
    CHECK(c.grid.n == 64);
    CHECK(c.params.nu == 1.0);
    CHECK(c.initial.kind == InitialKind::random_bandlimited);
    CHECK(c.initial.seed == 42);
    CHECK(c.diagnostics.cadence == 10);
}

TEST_CASE("config parses every section") {
    const RunConfig c = parse_config(R"({
      "grid": {"n": 32, "length": 6.0},
      "params": {"alpha": 0.3, "b": 0.5, "gamma_u": 1.2},
      "stepper": {"dt": 0.002, "t_end": 0.5, "max_steps": 9},
      "initial_condition": {"kind": "taylor_green", "seed": 7, "amplitude": 2.0, "band": [2, 5], "tau_kind": "from_Du"},
      "diagnostics": {"r_list": [3, 5], "s_list": [1.5], "pq_list": [[4, 2], [6, 3]], "cadence": 5},
      "output": {"dir": "out", "snapshot_every": 10, "checkpoint_every": 20}
    })");
    CHECK(c.grid.n == 32);
    CHECK(c.grid.length == 6.0);
    CHECK(c.params.alpha == 0.3);
    CHECK(c.params.b == 0.5);
    CHECK(c.stepper.max_steps == 9);
    CHECK(c.initial.kind == InitialKind::taylor_green);
    CHECK(c.initial.tau_kind == TauKind::from_Du);
    CHECK(c.initial.kmin == 2.0);
    CHECK(c.initial.kmax == 5.0);
    CHECK(c.diagnostics.pq_list.size() == 2);
    CHECK(c.diagnostics.pq_list[1].second == 3.0);
    CHECK(c.output.checkpoint_every == 20);
}

TEST_CASE("strict schema rejects unknown keys, wrong types and bad values") {
    CHECK_THROWS_AS(parse_config(R"({"grdi": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"params": {"nu": 1, "zeta": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"n": "64"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"n": 63}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"params": {"b": 2}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"initial_condition": {"kind": "vortex"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"initial_condition": {"band": [4, 2]}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"initial_condition": {"seed": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("canonical serialization round trips") {
    RunConfig c;
    c.params.alpha = 0.1;
    c.params.eta = -0.5;
    c.initial.seed = 123456789012345ull;
    c.diagnostics.pq_list = {{4.0, 2.0}, {8.0, 1.0}};
    c.stepper.dt = 1.0 / 3.0;
    const std::string text = serialize_config(c);
    CHECK(serialize_config(parse_config(text)) == text);
    CHECK(parse_config(text).stepper.dt == c.stepper.dt);
    CHECK(text.back() == '\n');
}

TEST_CASE("random initial state is solenoidal, mean-free and band-limited") {
    const GridPtr g = Grid::create(32);
    InitialConditionConfig ic;
    ic.kmin = 2.0;
    ic.kmax = 6.0;
    ic.amplitude = 1.5;
    const State s = make_initial(ic, g);
    CHECK(divergence_defect(s.u) < 1e-14);
    CHECK(std::abs(s.u[0].mode(0, 0)) == 0.0);
    CHECK(std::abs(s.u[1].mode(0, 0)) == 0.0);
    // Spectral support inspection.
    double outside = 0.0, inside = 0.0;
    for (const ScalarField* f : {&s.u[0], &s.u[1], &s.tau.xx, &s.tau.xy, &s.tau.yy})
        for (std::size_t m = 0; m < g->spectral_size(); ++m) {
            const double k = g->k_magnitude()[m];
            const double a = std::norm(f->spectrum()[m]);
            (k >= 2.0 - 1e-12 && k <= 6.0 + 1e-12 ? inside : outside) += a;
        }
    CHECK(inside > 0.0);
    CHECK(outside == 0.0);
    CHECK(std::isfinite(sobolev_norm(s.u, 8.0, SobolevKind::inhomogeneous)));
    // RMS velocity equals the amplitude.
    const double area = g->length() * g->length();
    CHECK(lp_norm(s.u, 2.0) / std::sqrt(area) == doctest::Approx(1.5));
}

TEST_CASE("same seed gives identical states, different seeds differ") {
    const GridPtr g = Grid::create(32);
    InitialConditionConfig ic;
    const State a = make_initial(ic, g), b = make_initial(ic, g);
    CHECK(std::memcmp(a.u[0].values().data(), b.u[0].values().data(), g->physical_size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.tau.xy.values().data(), b.tau.xy.values().data(), g->physical_size() * sizeof(double)) == 0);
    ic.seed = 43;
    const State c = make_initial(ic, g);
    CHECK(lp_norm(c.u[0] - a.u[0], 2.0) > 0.1);
}

TEST_CASE("the same band draws the same modes on every resolution") {
    InitialConditionConfig ic;
    ic.kmax = 5.0;
    const State a = make_initial(ic, Grid::create(16));
    const State b = make_initial(ic, Grid::create(32));
    CHECK(a.u[0].mode(3, 2).real() == doctest::Approx(b.u[0].mode(3, 2).real()).epsilon(1e-12));
    CHECK(a.tau.xy.mode(-1, 4).imag() == doctest::Approx(b.tau.xy.mode(-1, 4).imag()).epsilon(1e-12));
}

TEST_CASE("Taylor-Green initial field") {
    const GridPtr g = Grid::create(16);
    InitialConditionConfig ic;
    ic.kind = InitialKind::taylor_green;
    ic.amplitude = 2.0;
    ic.tau_kind = TauKind::zero;
    const State s = make_initial(ic, g);
    const int i = 3, j = 5;
    const double x = i * g->dx(), y = j * g->dx();
    CHECK(s.u[0].at(i, j) == doctest::Approx(2.0 * std::sin(x) * std::cos(y)));
    CHECK(s.u[1].at(i, j) == doctest::Approx(-2.0 * std::cos(x) * std::sin(y)));
    CHECK(divergence_defect(s.u) < 1e-14);
    CHECK(lp_norm(s.tau, infinity) == 0.0);
}

TEST_CASE("tau from Du and the shear layer") {
    const GridPtr g = Grid::create(32);
    InitialConditionConfig ic;
    ic.tau_kind = TauKind::from_Du;
    ic.kmax = 6.0;
    const State s = make_initial(ic, g);
    const SymTensorField Du = strain_and_rotation(s.u).strain;
    CHECK(lp_norm(combine(1.0, s.tau, -1.0, Du), infinity) < 1e-14);
    ic.kind = InitialKind::shear_layer;
    const State sl = make_initial(ic, g);
    CHECK(divergence_defect(sl.u) < 1e-13);
    CHECK(lp_norm(sl.u, infinity) > 0.5);
}

TEST_CASE("band beyond the dealias radius is rejected") {
    InitialConditionConfig ic;
    ic.kmax = 11.0;
    CHECK_THROWS_AS(make_initial(ic, Grid::create(32)), ConfigError);
    ic.kmax = 10.0;
    CHECK_NOTHROW(make_initial(ic, Grid::create(32)));
}

TEST_CASE("unit perturbation") {
    const GridPtr g = Grid::create(32);
    const State p = make_perturbation(g, 7, 1.0, 4.0);
    const double nu = lp_norm(p.u, 2.0), nt = lp_norm(p.tau, 2.0);
    CHECK(nu * nu + nt * nt == doctest::Approx(1.0));
    CHECK(divergence_defect(p.u) < 1e-14);
}
