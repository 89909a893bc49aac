#include "ob2d/error.hpp"
#include "ob2d/initial.hpp"
#include "ob2d/model.hpp"
#include "ob2d/norms.hpp"
#include "ob2d/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace ob2d;

namespace {

ScalarField sample(const GridPtr& g, const std::function<double(double, double)>& f) {
    RealArray v(g->physical_size());
    for (int i = 0; i < g->n(); ++i)
        for (int j = 0; j < g->n(); ++j) v[static_cast<std::size_t>(i) * g->n() + j] = f(i * g->dx(), j * g->dx());
    return ScalarField::from_physical(g, std::move(v));
}

double dist(const ScalarField& a, const ScalarField& b) { return lp_norm(a - b, infinity); }

State low_band_state(const GridPtr& g, std::uint64_t seed) {
    InitialConditionConfig ic;
    ic.seed = seed;
    ic.kmax = 4.0;
    return make_initial(ic, g);
}

using M2 = std::array<std::array<double, 2>, 2>;

M2 mul(const M2& a, const M2& b) {
    M2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

// Pointwise stress right-hand side written out with explicit 2x2 matrices.
SymTensorField stress_oracle(const State& s, const ModelParams& p) {
    const GridPtr& g = s.grid_ptr();
    const std::size_t n = g->physical_size();
    const ScalarField d[2][2] = {{partial(s.u[0], 0), partial(s.u[0], 1)}, {partial(s.u[1], 0), partial(s.u[1], 1)}};
    const ScalarField* t[2][2] = {{&s.tau.xx, &s.tau.xy}, {&s.tau.xy, &s.tau.yy}};
    const ScalarField dt[2][2][2] = {{{partial(s.tau.xx, 0), partial(s.tau.xx, 1)}, {partial(s.tau.xy, 0), partial(s.tau.xy, 1)}},
                                     {{partial(s.tau.xy, 0), partial(s.tau.xy, 1)}, {partial(s.tau.yy, 0), partial(s.tau.yy, 1)}}};
    RealArray out[3] = {RealArray(n), RealArray(n), RealArray(n)};
    for (std::size_t q = 0; q < n; ++q) {
        M2 G, T, D, W;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                G[i][j] = d[i][j].values()[q]; // d_j u_i
                T[i][j] = t[i][j]->values()[q];
            }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                D[i][j] = 0.5 * (G[i][j] + G[j][i]);
                W[i][j] = 0.5 * (G[i][j] - G[j][i]);
            }
        const M2 WT = mul(W, T), TW = mul(T, W), DT = mul(D, T), TD = mul(T, D);
        const int idx[3][2] = {{0, 0}, {0, 1}, {1, 1}};
        for (int c = 0; c < 3; ++c) {
            const int i = idx[c][0], j = idx[c][1];
            const double adv = s.u[0].values()[q] * dt[i][j][0].values()[q] + s.u[1].values()[q] * dt[i][j][1].values()[q];
            out[c][q] = -adv - p.beta * T[i][j] + p.eta * (WT[i][j] - TW[i][j]) + p.b * (DT[i][j] + TD[i][j]) +
                        p.gamma_f * D[i][j];
        }
    }
    const ScalarField* comps[3] = {&s.tau.xx, &s.tau.xy, &s.tau.yy};
    SymTensorField r;
    ScalarField* dst[3] = {&r.xx, &r.xy, &r.yy};
    for (int c = 0; c < 3; ++c)
        *dst[c] = ScalarField::from_physical(g, std::move(out[c])) -
                  p.mu * fractional_laplacian(*comps[c], 2.0 * p.alpha);
    return r;
}

} // namespace

TEST_CASE("strain and rotation of a shear flow") {
    const GridPtr g = Grid::create(16);
    const VectorField u{{sample(g, [](double, double y) { return std::sin(y); }), ScalarField::zeros(g)}};
    const StrainRotation sr = strain_and_rotation(u);
    const ScalarField half_cos = sample(g, [](double, double y) { return 0.5 * std::cos(y); });
    CHECK(dist(sr.strain.xy, half_cos) < 1e-14);
    CHECK(lp_norm(sr.strain.xx, infinity) < 1e-14);
    CHECK(dist(sr.rotation.xy, half_cos) < 1e-14);
    // Omega12 = -omega / 2.
    CHECK(dist(sr.rotation.xy, -0.5 * curl(u)) < 1e-14);
}

TEST_CASE("stress right-hand side matches an explicit matrix oracle") {
    const GridPtr g = Grid::create(32);
    ModelParams p = ModelParams::paper_normalized(0.5);
    p.beta = 0.3;
    p.b = -0.4;
    p.eta = 0.8;
    p.gamma_f = 1.7;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        CAPTURE(seed);
        const State s = low_band_state(g, seed);
        const SymTensorField r = rhs_stress(s, p);
        const SymTensorField o = stress_oracle(s, p);
        CHECK(dist(r.xx, o.xx) < 1e-11);
        CHECK(dist(r.xy, o.xy) < 1e-11);
        CHECK(dist(r.yy, o.yy) < 1e-11);
    }
}

TEST_CASE("velocity forcing and pressure from a stress mode") {
    const GridPtr g = Grid::create(16);
    ModelParams p;
    p.kappa = 2.0;
    const ScalarField c = sample(g, [](double x, double) { return std::cos(x); });
    State s{0.0, VectorField::zeros(g), SymTensorField{ScalarField::zeros(g), c, ScalarField::zeros(g)}};
    // div tau = (0, -sin x), already solenoidal.
    const VectorField r = rhs_velocity(s, p);
    CHECK(lp_norm(r[0], infinity) < 1e-14);
    CHECK(dist(r[1], sample(g, [](double x, double) { return -2.0 * std::sin(x); })) < 1e-13);

    State s2{0.0, VectorField::zeros(g), SymTensorField{c, ScalarField::zeros(g), ScalarField::zeros(g)}};
    CHECK(dist(compute_pressure(s2, p), 2.0 * c) < 1e-13);
    CHECK(lp_norm(rhs_velocity(s2, p), infinity) < 1e-13);
}

TEST_CASE("vorticity right-hand side is the curl of the velocity one") {
    const GridPtr g = Grid::create(32);
    const ModelParams p = ModelParams::paper_normalized(0.3);
    const State s = low_band_state(g, 9);
    CHECK(dist(rhs_vorticity(s, p), curl(rhs_velocity(s, p))) < 1e-10);
}

TEST_CASE("explicit tendency plus linear decay equals the full right-hand side") {
    const GridPtr g = Grid::create(32);
    ModelParams p = ModelParams::paper_normalized(0.7);
    p.beta = 0.2;
    const State s = low_band_state(g, 4);
    const StateSpectra e = explicit_tendency(s, p);
    const StateSpectra x = spectra_of(s);
    const RealArray du = velocity_decay(*g, p), dt = stress_decay(*g, p);
    StateSpectra full;
    for (int c = 0; c < 5; ++c) {
        full[c] = e[c];
        const RealArray& d = c < 2 ? du : dt;
        for (std::size_t m = 0; m < d.size(); ++m) full[c][m] -= d[m] * x[c][m];
    }
    const State f = state_from_spectra(g, full, 0.0);
    const VectorField ru = rhs_velocity(s, p);
    const SymTensorField rt = rhs_stress(s, p);
    CHECK(dist(f.u[0], ru[0]) < 1e-12);
    CHECK(dist(f.u[1], ru[1]) < 1e-12);
    CHECK(dist(f.tau.xx, rt.xx) < 1e-12);
    CHECK(dist(f.tau.xy, rt.xy) < 1e-12);
    CHECK(dist(f.tau.yy, rt.yy) < 1e-12);
}

TEST_CASE("alpha = 0 switches stress dissipation off") {
    const GridPtr g = Grid::create(16);
    ModelParams p = ModelParams::paper_normalized(0.0);
    p.beta = 0.5;
    const RealArray d = stress_decay(*g, p);
    for (double v : d) CHECK(v == 0.5);
}

TEST_CASE("parameter validation and energy weight") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.energy_weight() == 1.0);
    p.kappa = 3.0;
    p.gamma_f = 1.5;
    CHECK(p.energy_weight() == 2.0);
    CHECK(p.energy_balanced());
    p.b = 0.5;
    CHECK_FALSE(p.energy_balanced());
    p.b = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = ModelParams{};
    p.kappa = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = ModelParams{};
    p.gamma_u = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    const ModelParams gd = ModelParams::generalized_dissipation(1.25);
    CHECK(gd.mu == 0.0);
    CHECK(gd.gamma_u == 1.25);
}

TEST_CASE("state spectra round trip") {
    const GridPtr g = Grid::create(16);
    const State s = low_band_state(g, 5);
    const State back = state_from_spectra(g, spectra_of(s), 1.5);
    CHECK(back.time == 1.5);
    CHECK(dist(back.u[0], s.u[0]) < 1e-15);
    CHECK(dist(back.tau.yy, s.tau.yy) < 1e-15);
}

TEST_CASE("strain is trace-free for solenoidal velocity") {
    const GridPtr g = Grid::create(32);
    for (std::uint64_t seed : {3u, 4u}) {
        const State s = low_band_state(g, seed);
        const StrainRotation sr = strain_and_rotation(s.u);
        CHECK(lp_norm(sr.strain.xx + sr.strain.yy, infinity) < 1e-11);
    }
    // Rigid rotation, band-limited: u = (sin y, -sin x) near the origin; strain is off-diagonal only.
    const VectorField rot{{sample(g, [](double, double y) { return std::sin(y); }),
                           sample(g, [](double x, double) { return -std::sin(x); })}};
    const StrainRotation sr = strain_and_rotation(rot);
    CHECK(std::fabs(sr.strain.xy.at(0, 0)) < 1e-14);
    CHECK(sr.rotation.xy.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("bilinear form Q on constant tensors") {
    const GridPtr g = Grid::create(8);
    auto constant = [&](double v) { return ScalarField::from_physical(g, RealArray(g->physical_size(), v)); };
    const SymTensorField id{constant(1.0), constant(0.0), constant(1.0)};
    const SymTensorField Du{constant(0.3), constant(-0.2), constant(-0.3)};
    const SkewTensorField W{constant(1.0)};
    // Identity commutes with Omega, so Q = 2 b Du.
    const SymTensorField q = bilinear_Q(Du, W, id, 0.5);
    CHECK(q.xx.at(2, 3) == doctest::Approx(0.3));
    CHECK(q.xy.at(2, 3) == doctest::Approx(-0.2));
    // Omega = 0, b = 0.
    const SymTensorField z = bilinear_Q(Du, SkewTensorField{constant(0.0)}, Du, 0.0);
    CHECK(lp_norm(z, infinity) == 0.0);
    // Omega12 = 1, tau = diag(1, -1): Omega tau - tau Omega = [[0, -2], [-2, 0]].
    const SymTensorField t{constant(1.0), constant(0.0), constant(-1.0)};
    const SymTensorField c = bilinear_Q(Du, W, t, 0.0);
    CHECK(c.xx.at(1, 1) == doctest::Approx(0.0));
    CHECK(c.xy.at(1, 1) == doctest::Approx(-2.0));
    CHECK(c.yy.at(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("velocity right-hand side: constant stress, Taylor-Green and solenoidality") {
    const GridPtr g = Grid::create(16);
    const ModelParams p = ModelParams::paper_normalized(0.5);
    const ScalarField c = ScalarField::from_physical(g, RealArray(g->physical_size(), 0.8));
    const State cs{0.0, VectorField::zeros(g), SymTensorField{c, c, c}};
    CHECK(lp_norm(rhs_velocity(cs, p), infinity) < 1e-15);
    // Taylor-Green: the advection is a gradient and projects out, leaving -nu |k|^2 u with |k|^2 = 2.
    const VectorField tg{{sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); }),
                          sample(g, [](double x, double y) { return -std::cos(x) * std::sin(y); })}};
    const State ts{0.0, tg, SymTensorField::zeros(g)};
    const VectorField r = rhs_velocity(ts, p);
    CHECK(dist(r[0], -2.0 * tg[0]) < 1e-13);
    CHECK(dist(r[1], -2.0 * tg[1]) < 1e-13);
    const State rs = low_band_state(g, 8);
    CHECK(divergence_defect(rhs_velocity(rs, p)) < 1e-11);
}

TEST_CASE("stress right-hand side: damping, forcing and an N = 16 oracle") {
    const GridPtr g = Grid::create(16);
    ModelParams p;
    p.beta = 1.0;
    p.mu = 0.0;
    const State s = low_band_state(g, 2);
    const State damp{0.0, VectorField::zeros(g), s.tau};
    const SymTensorField r = rhs_stress(damp, p);
    CHECK(lp_norm(combine(1.0, r, 1.0, s.tau), infinity) < 1e-14);

    p = ModelParams{};
    p.gamma_f = 1.7;
    const State forced{0.0, s.u, SymTensorField::zeros(g)};
    const SymTensorField f = rhs_stress(forced, p);
    CHECK(lp_norm(combine(1.0, f, -1.7, strain_and_rotation(s.u).strain), infinity) < 1e-14);

    // Full-band state: the mask now matters, so the oracle masks its pointwise sum.
    InitialConditionConfig ic;
    ic.seed = 19;
    ic.kmax = g->dealias_cutoff();
    const State full = make_initial(ic, g);
    p = ModelParams::paper_normalized(0.4);
    p.b = 0.3;
    p.beta = 0.1;
    const SymTensorField got = rhs_stress(full, p);
    const SymTensorField raw = stress_oracle(full, p);
    const SymTensorField dmp{p.mu * fractional_laplacian(full.tau.xx, 2 * p.alpha),
                             p.mu * fractional_laplacian(full.tau.xy, 2 * p.alpha),
                             p.mu * fractional_laplacian(full.tau.yy, 2 * p.alpha)};
    const SymTensorField pointwise = combine(1.0, raw, 1.0, dmp);
    const SymTensorField expect{dealias(pointwise.xx) - dmp.xx, dealias(pointwise.xy) - dmp.xy,
                                dealias(pointwise.yy) - dmp.yy};
    const double scale = lp_norm(expect, infinity);
    CHECK(lp_norm(combine(1.0, got, -1.0, expect), infinity) <= 1e-12 * scale);
}

TEST_CASE("vorticity equation: random states and pure stress") {
    const GridPtr g = Grid::create(32);
    ModelParams p = ModelParams::paper_normalized(0.5);
    p.kappa = 1.3;
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        InitialConditionConfig ic;
        ic.seed = seed;
        ic.kmax = 8.0;
        const State s = make_initial(ic, g);
        const ScalarField a = rhs_vorticity(s, p), b = curl(rhs_velocity(s, p));
        CHECK(dist(a, b) <= 1e-11 * lp_norm(a, infinity));
    }
    const State s = low_band_state(g, 1);
    const State pure{0.0, VectorField::zeros(g), s.tau};
    CHECK(dist(rhs_vorticity(pure, p), 1.3 * curl_div(s.tau)) < 1e-11);
    const ScalarField c = ScalarField::from_physical(g, RealArray(g->physical_size(), 2.0));
    CHECK(lp_norm(curl_div(SymTensorField{c, ScalarField::zeros(g), c}), infinity) == 0.0);
}

TEST_CASE("pressure: constant stress, momentum divergence and a single mode") {
    const GridPtr g = Grid::create(32);
    ModelParams p;
    p.kappa = 1.4;
    const ScalarField c = ScalarField::from_physical(g, RealArray(g->physical_size(), 0.5));
    const State cs{0.0, VectorField::zeros(g), SymTensorField{c, ScalarField::zeros(g), c}};
    CHECK(lp_norm(compute_pressure(cs, p), infinity) < 1e-15);

    const State s = low_band_state(g, 12);
    const ScalarField pi = compute_pressure(s, p);
    const VectorField divt = divergence(s.tau);
    const ScalarField f1 = -1.0 * advect(s.u, s.u[0]) - partial(pi, 0) + p.kappa * divt[0];
    const ScalarField f2 = -1.0 * advect(s.u, s.u[1]) - partial(pi, 1) + p.kappa * divt[1];
    const ScalarField div = partial(f1, 0) + partial(f2, 1);
    CHECK(lp_norm(div, infinity) <= 1e-10);

    // tau12 = cos(x + 2y): pihat = 2 k1 k2 kappa tau12hat / |k|^2 = 2 * 2 * 1.4 / 5.
    const ScalarField m = sample(g, [](double x, double y) { return std::cos(x + 2 * y); });
    const State ms{0.0, VectorField::zeros(g), SymTensorField{ScalarField::zeros(g), m, ScalarField::zeros(g)}};
    CHECK(dist(compute_pressure(ms, p), (4.0 * 1.4 / 5.0) * m) < 1e-13);
}
