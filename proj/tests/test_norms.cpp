#include "ob2d/norms.hpp"
#include "ob2d/initial.hpp"
#include "ob2d/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ob2d;
using std::numbers::pi;

namespace {

ScalarField wave(const GridPtr& g, int k1, int k2, double amp = 1.0) {
    RealArray v(g->physical_size());
    for (int i = 0; i < g->n(); ++i)
        for (int j = 0; j < g->n(); ++j)
            v[static_cast<std::size_t>(i) * g->n() + j] = amp * std::cos(k1 * i * g->dx() + k2 * j * g->dx());
    return ScalarField::from_physical(g, std::move(v));
}

} // namespace

TEST_CASE("Lebesgue norms of a cosine") {
    const GridPtr g = Grid::create(32);
    const ScalarField f = wave(g, 1, 0);
    // int cos^2 = 2 pi^2, int cos^4 = 3/8 (2 pi)^2, int cos^6 = 5/16 (2 pi)^2.
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(2.0) * pi).epsilon(1e-14));
    CHECK(lp_norm(f, 4.0) == doctest::Approx(std::pow(1.5 * pi * pi, 0.25)).epsilon(1e-14));
    CHECK(lp_norm(f, 6.0) == doctest::Approx(std::pow(1.25 * pi * pi, 1.0 / 6.0)).epsilon(1e-14));
    CHECK(lp_norm(f, infinity) == doctest::Approx(1.0));
    CHECK(lp_norm(f, 2.0) * lp_norm(f, 2.0) == doctest::Approx(spectral_energy(f)).epsilon(1e-14));
}

TEST_CASE("vector and tensor norms are Euclidean and Frobenius") {
    const GridPtr g = Grid::create(16);
    const ScalarField a = wave(g, 1, 2), b = wave(g, 3, -1, 0.5), c = wave(g, 0, 2, 2.0);
    const VectorField v{{a, b}};
    CHECK(lp_norm(v, 2.0) == doctest::Approx(std::sqrt(spectral_energy(a) + spectral_energy(b))).epsilon(1e-14));
    const SymTensorField t{a, b, c};
    const double fro = std::sqrt(spectral_energy(a) + 2 * spectral_energy(b) + spectral_energy(c));
    CHECK(lp_norm(t, 2.0) == doctest::Approx(fro).epsilon(1e-14));
    CHECK(sobolev_norm(t, 0.0, SobolevKind::homogeneous) == doctest::Approx(fro).epsilon(1e-14));
}

TEST_CASE("Sobolev norms of a single mode") {
    const GridPtr g = Grid::create(32);
    const ScalarField f = wave(g, 3, 4);
    const double l2 = lp_norm(f, 2.0);
    for (double s : {0.5, 1.0, 2.0}) {
        CAPTURE(s);
        CHECK(sobolev_norm(f, s, SobolevKind::homogeneous) == doctest::Approx(std::pow(5.0, s) * l2).epsilon(1e-13));
        CHECK(sobolev_norm(f, s, SobolevKind::inhomogeneous) ==
              doctest::Approx(std::pow(26.0, s / 2) * l2).epsilon(1e-13));
    }
}

TEST_CASE("dyadic blocks partition the spectrum") {
    const GridPtr g = Grid::create(32);
    const ScalarField f = random_bandlimited_field(g, 3, 1.0, 10.0);
    ScalarField sum = ScalarField::zeros(g);
    for (int j = -1; j <= max_dyadic_index(*g); ++j) sum = sum + dyadic_block(f, j);
    CHECK(lp_norm(sum - f, 2.0) < 1e-13 * lp_norm(f, 2.0));
    CHECK(lp_norm(dyadic_block(wave(g, 3, 0), 1), infinity) == doctest::Approx(1.0));
    CHECK(lp_norm(dyadic_block(wave(g, 3, 0), 2), 2.0) < 1e-15);
}

TEST_CASE("Besov norm of single modes") {
    const GridPtr g = Grid::create(32);
    CHECK(besov_norm(wave(g, 3, 0), 0.55, 2.0) == doctest::Approx(std::pow(2.0, -0.55)));
    CHECK(besov_norm(wave(g, 5, 0), 0.55, 2.0) == doctest::Approx(std::pow(4.0, -0.55)));
    // Two blocks combine in l^2 and in l^inf.
    const ScalarField two = wave(g, 3, 0) + wave(g, 0, 5);
    const double a = std::pow(2.0, -0.55), b = std::pow(4.0, -0.55);
    CHECK(besov_norm(two, 0.55, 2.0) == doctest::Approx(std::hypot(a, b)));
    CHECK(besov_norm(two, 0.55, infinity) == doctest::Approx(a));
}

TEST_CASE("constant field and homogeneous versus inhomogeneous Sobolev norms") {
    const GridPtr g = Grid::create(16);
    RealArray one(g->physical_size(), 1.0);
    CHECK(lp_norm(ScalarField::from_physical(g, one), 2.0) == doctest::Approx(2.0 * pi));
    const ScalarField f = random_bandlimited_field(g, 1, 1.0, 5.0);
    CHECK(sobolev_norm(f, 0.0, SobolevKind::homogeneous) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const ScalarField h = random_bandlimited_field(g, 50 + seed, 1.0, 5.0);
        CHECK(sobolev_norm(h, 1.7, SobolevKind::homogeneous) <= sobolev_norm(h, 1.7, SobolevKind::inhomogeneous));
    }
}

TEST_CASE("Bernstein ratio per dyadic block is finite") {
    const GridPtr g = Grid::create(64);
    const ScalarField f = random_bandlimited_field(g, 77, 1.0, 21.0);
    double worst = 0.0;
    for (int j = 0; j <= 4; ++j) {
        const ScalarField b = dyadic_block(f, j);
        const double ratio = lp_norm(b, infinity) / (std::pow(2.0, 2.0 * j / 4.0) * lp_norm(b, 4.0));
        CHECK(std::isfinite(ratio));
        worst = std::max(worst, ratio);
    }
    MESSAGE("max ||D_j f||_inf / (2^{j/2} ||D_j f||_4) = " << worst);
}

TEST_CASE("Besov norm of zero and of a block j = 2 mode at s = 1") {
    const GridPtr g = Grid::create(32);
    CHECK(besov_norm(ScalarField::zeros(g), 1.0, 2.0) == 0.0);
    const ScalarField f = wave(g, 0, 5, 3.0);
    CHECK(besov_norm(f, 1.0, 2.0) == doctest::Approx(0.25 * lp_norm(f, infinity)));
}
