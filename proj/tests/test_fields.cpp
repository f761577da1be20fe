/// @file test_fields.cpp
/// @brief Grids, quadrature, synthetic fields and field I/O.

#include <doctest.h>

#include "pelab/commutator.hpp"
#include "pelab/energy_budget.hpp"
#include "pelab/error.hpp"
#include "pelab/field_io.hpp"
#include "pelab/holder.hpp"
#include "pelab/hydrostatics.hpp"
#include "pelab/quadrature.hpp"
#include "pelab/reference.hpp"
#include "pelab/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

using namespace pelab;

namespace {
constexpr double kPi = std::numbers::pi;

SField from_fn(const Grid3& g, double (*f)(double, double, double)) {
    SField s(g);
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const auto [x, y] = g.column_xy(c);
        for (int k = 0; k < g.nzp(); ++k) s[c * g.nzp() + k] = f(x, y, g.z(k));
    }
    return s;
}
} // namespace

TEST_CASE("quadrature of constants and trigonometric integrands") {
    const Grid3 g = Grid3::channel(32, 32, 8);
    CHECK(integrate(SField(g, 1.0)) == doctest::Approx(4 * kPi * kPi).epsilon(1e-13));
    CHECK(std::abs(integrate(from_fn(g, [](double x, double, double) { return std::sin(x); }))) < 1e-12);
    const double c2 = integrate(from_fn(g, [](double x, double, double) { return std::cos(x) * std::cos(x); }));
    CHECK(c2 == doctest::Approx(2 * kPi * kPi).epsilon(1e-10));
    // Trapezoid in z is exact for linear profiles.
    const double lin = integrate(from_fn(g, [](double, double, double z) { return 3 * z + 1; }));
    CHECK(lin == doctest::Approx(4 * kPi * kPi * 2.5).epsilon(1e-13));
}

TEST_CASE("parallel quadrature agrees with the serial reference") {
    const Grid3 g = Grid3::channel(24, 20, 12, 1.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1, 1);
    SField f(g);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = U(rng);
    CHECK(integrate(f) == doctest::Approx(reference::integrate(f)).epsilon(1e-13));
}

TEST_CASE("pairwise sum is exact on integers and order independent in bulk") {
    std::vector<double> a(1000);
    for (int i = 0; i < 1000; ++i) a[i] = i + 1;
    CHECK(pairwise_sum(a) == 500500.0);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("Weierstrass field with one octave and zero phases at the origin") {
    const Grid3 g = Grid3::channel(16, 16, 16, 1.0);
    SyntheticSpec s;
    s.alpha = 0.7;
    s.beta = 0.7;
    s.K = 1;
    s.phases_zero = true;
    const HField u = make_weierstrass(s, g);
    const double expect = 3.0 * (1.0 + std::pow(2.0, -0.7));
    CHECK(expect == doctest::Approx(4.847).epsilon(1e-3));
    CHECK(u[0](0, 0, 0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(u[1](0, 0, 0) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("Weierstrass fields are seeded deterministically") {
    const Grid3 g = Grid3::channel(16, 16, 16, 1.0);
    SyntheticSpec s;
    s.K = 3;
    s.seed = 11;
    const HField a = make_weierstrass(s, g), b = make_weierstrass(s, g);
    CHECK(a[0].values() == b[0].values());
    s.seed = 12;
    const HField c = make_weierstrass(s, g);
    CHECK(a[0].values() != c[0].values());
}

TEST_CASE("column-balanced Weierstrass field has an x-independent vertical mean") {
    const Grid3 g = Grid3::channel(32, 32, 32, 1.0);
    SyntheticSpec s;
    s.K = 3;
    s.column_balanced = true;
    CHECK(column_constraint(make_weierstrass(s, g)) < 1e-10);
}

TEST_CASE("synthetic spec validation") {
    const Grid3 g = Grid3::channel(16, 16, 16, 1.0);
    SyntheticSpec s;
    s.alpha = 2.5;
    CHECK_THROWS_AS(make_weierstrass(s, g), PreconditionError);
    s = {};
    s.lambda = 2.5;
    CHECK_THROWS_AS(make_weierstrass(s, g), PreconditionError);
    s = {};
    s.K = max_resolvable_octave(g, 2.0) + 1;
    CHECK_THROWS_AS(make_weierstrass(s, g), PreconditionError);
}

TEST_CASE("K = 0 field is smooth") {
    const Grid3 g = Grid3::channel(64, 64, 64, 1.0);
    SyntheticSpec s;
    s.K = 0;
    const ExponentEstimate e = estimate_exponents(make_weierstrass(s, g));
    CHECK(e.alphaHat >= 0.95);
    CHECK(e.betaHat >= 0.95);
}

TEST_CASE("Taylor-Green cell") {
    const Grid3 g = Grid3::channel(64, 64, 4);
    const HField u = taylor_green(g);
    // x = pi/2 is node 16, y = 0 is node 0.
    CHECK(u[0](16, 0, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(u[1](16, 0, 2)) < 1e-15);
    const SField div = horizontal_derivative(u[0], HAxis::X, DerivScheme::Centered) +
                       horizontal_derivative(u[1], HAxis::Y, DerivScheme::Centered);
    CHECK(div.max_abs() <= 10 * g.hx() * g.hx());
    // Quadrature oracle: 1/2 int (sin^2 x cos^2 y + cos^2 x sin^2 y) = (2 pi)^2 / 4.
    CHECK(global_energy(u) == doctest::Approx(kPi * kPi).epsilon(1e-6));
}

TEST_CASE("field round trip through the binary container") {
    const Grid3 g = Grid3::channel(16, 12, 10, 1.0);
    SyntheticSpec s;
    s.K = 2;
    const HField u = make_weierstrass(s, g);
    const std::string path = "pelab_test_field.bin";
    write_field(path, u);
    const auto back = read_field(path, 1.0);
    std::remove(path.c_str());
    REQUIRE(back.size() == 2);
    CHECK(back[0].grid() == g);
    CHECK(back[0].values() == u[0].values());
    CHECK(back[1].values() == u[1].values());
    CHECK_THROWS_AS(read_field("does_not_exist.bin"), Error);
}
