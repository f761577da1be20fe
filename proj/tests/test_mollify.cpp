/// @file test_mollify.cpp
/// @brief Mollifier kernels, convolution backends and the cutoff extension.

#include <doctest.h>

#include "pelab/error.hpp"
#include "pelab/mollify.hpp"
#include "pelab/quadrature.hpp"
#include "pelab/reference.hpp"
#include "pelab/scaling.hpp"
#include "pelab/synthetic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace pelab;

namespace {
constexpr double kPi = std::numbers::pi;

SField random_field(const Grid3& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1, 1);
    SField f(g);
    for (std::size_t n = 0; n < f.size(); ++n) f[n] = U(rng);
    return f;
}

// 1 - <cos Y1> for the continuum radial bump of radius eps: the angular average of cos(k Y.e)
// over a sphere of radius r is sin(r)/r, so the deficit is 1 - int sinc(r) rho r^2 / int rho r^2.
double continuum_sin_deficit(double eps) {
    using boost::math::quadrature::gauss_kronrod;
    const auto rho = [&](double r) { return bump_profile(r / eps) * r * r; };
    const double mass = gauss_kronrod<double, 61>::integrate(rho, 0.0, eps, 10, 1e-14);
    const double mom = gauss_kronrod<double, 61>::integrate(
        [&](double r) { return rho(r) * (r > 0 ? std::sin(r) / r : 1.0); }, 0.0, eps, 10, 1e-14);
    return 1.0 - mom / mass;
}
} // namespace

TEST_CASE("kernel stencil is normalized and even") {
    const Grid3 g = Grid3::channel(64, 64, 64, 1.0);
    const KernelStencil st = build_stencil(g, 0.1);
    CHECK(st.mass() == doctest::Approx(1.0).epsilon(1e-14));
    double mx = 0, my = 0, mz = 0;
    for (const auto& t : st.taps) {
        CHECK(t.w >= 0.0);
        mx += t.w * t.di * g.hx();
        my += t.w * t.dj * g.hy();
        mz += t.w * t.dk * g.hz();
    }
    CHECK(std::abs(mx) < 1e-14);
    CHECK(std::abs(my) < 1e-14);
    CHECK(std::abs(mz) < 1e-14);
}

TEST_CASE("kernel resolution and width limits") {
    const Grid3 g = Grid3::channel(32, 32, 32, 1.0);
    CHECK_THROWS_AS(build_stencil(g, 0.05), PreconditionError);
    CHECK_THROWS_AS(build_stencil(g, 0.6), PreconditionError);
    CHECK_NOTHROW(build_stencil(g, 1.0 / 16));
}

TEST_CASE("constants are preserved away from the vertical walls") {
    const Grid3 g = Grid3::channel(32, 32, 32, 1.0);
    const double eps = 0.125;
    const SField f = mollify(SField(g, 2.5), Mollifier{eps});
    for (std::size_t c = 0; c < g.ncols(); ++c)
        for (int k = 0; k < g.nzp(); ++k)
            if (g.z(k) >= eps && g.z(k) <= 1 - eps) REQUIRE(f[c * g.nzp() + k] == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("serial, parallel and FFT backends agree") {
    const Grid3 g = Grid3::channel(32, 24, 20, 1.0);
    const SField f = random_field(g, 5);
    for (double eps : {0.1, 0.2}) {
        const Mollifier m{eps};
        const SField a = mollify(f, m, Backend::Serial);
        const SField b = mollify(f, m, Backend::Parallel);
        const SField c = mollify(f, m, Backend::FFT);
        double db = 0, dc = 0;
        for (std::size_t n = 0; n < f.size(); ++n) {
            db = std::max(db, std::abs(a[n] - b[n]));
            dc = std::max(dc, std::abs(a[n] - c[n]));
        }
        CHECK(db < 1e-13);
        CHECK(dc < 1e-12);
    }
}

TEST_CASE("even kernel gives a second-order deficit on sin x") {
    const Grid3 g = Grid3::channel(256, 256, 40);
    SField f(g);
    for (std::size_t c = 0; c < g.ncols(); ++c)
        for (int k = 0; k < g.nzp(); ++k) f[c * g.nzp() + k] = std::sin(g.column_xy(c).first);
    const std::vector<double> eps = {0.4, 0.2, 0.1, 0.05};
    std::vector<double> deficit;
    const int kmid = g.nz() / 2;
    for (double e : eps) {
        const SField fe = mollify(f, Mollifier{e});
        double d = 0;
        for (std::size_t c = 0; c < g.ncols(); ++c)
            d = std::max(d, std::abs(f[c * g.nzp() + kmid] - fe[c * g.nzp() + kmid]));
        deficit.push_back(d);
        CHECK(d == doctest::Approx(continuum_sin_deficit(e)).epsilon(0.1));
    }
    CHECK(deficit[2] <= 0.01);
    const ScalingFit fit = fit_loglog(eps, deficit);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("time mollification keeps interior snapshots and preserves linear trends") {
    const Grid3 g = Grid3::channel(8, 8, 8, 1.0);
    std::vector<SField> snaps;
    for (int t = 0; t < 9; ++t) snaps.push_back(SField(g, 1.0 + 0.5 * t));
    const auto out = mollify_time(snaps, 0.1, 0.25);
    REQUIRE(out.size() == 5);
    // Even kernel: a linear signal is reproduced at the centre of its window.
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i][0] == doctest::Approx(1.0 + 0.5 * (i + 2)).epsilon(1e-13));
    CHECK_THROWS_AS(mollify_time(snaps, 0.1, 0.05), PreconditionError);
}

TEST_CASE("cutoff extension of a constant") {
    const Grid3 g = Grid3::channel(64, 64, 64, 1.0);
    Box q3;
    q3.lo = {0.4, 0.4, 0.4};
    q3.hi = {0.6, 0.6, 0.6};
    const CutoffExtension c = CutoffExtension::around(q3, 0.08);
    const SField e = extend(SField(g, 1.0), c);
    double prev = 1.0;
    for (std::size_t col = 0; col < g.ncols(); ++col) {
        const auto [x, y] = g.column_xy(col);
        for (int k = 0; k < g.nzp(); ++k) {
            const double v = e[col * g.nzp() + k];
            if (c.q2.contains(x, y, g.z(k))) REQUIRE(v == 1.0);
            if (!c.q1.contains(x, y, g.z(k))) REQUIRE(v == 0.0);
        }
    }
    // Monotone transition along the ray from the centre in +x.
    const int j = 32, k = 32;
    for (int i = 32; i < 64; ++i) {
        const double v = e(i, j, k);
        CHECK(v <= prev);
        prev = v;
    }
    Box wide;
    wide.lo = {0.1, 0.1, 0.05};
    wide.hi = {0.9, 0.9, 0.9};
    CHECK_THROWS_AS(extend(SField(g, 1.0), CutoffExtension::around(wide, 0.08)), PreconditionError);
}

TEST_CASE("mollified pairing is blind to the cutoff inside Q3") {
    const Grid3 g = Grid3::channel(64, 64, 64, 1.0);
    Box q3;
    q3.lo = {0.35, 0.35, 0.35};
    q3.hi = {0.65, 0.65, 0.65};
    const CutoffExtension c = CutoffExtension::around(q3, 0.1);
    const SField Psi = make_box_weight(g, q3.inflate(-0.05), q3);
    const SField f = random_field(g, 9);
    const KernelStencil st = build_stencil(g, 0.04);
    // Oracle path: serial direct sum on both sides.
    const double lhs = integrate_product(reference::mollify_direct(extend(f, c), st), Psi);
    const double rhs = integrate_product(reference::mollify_direct(f, st), Psi);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
}

TEST_CASE("cutoff identities for pointwise nonlinearities") {
    const Grid3 g = Grid3::channel(64, 64, 64, 1.0);
    Box q3;
    q3.lo = {0.35, 0.35, 0.35};
    q3.hi = {0.65, 0.65, 0.65};
    const CutoffExtension c = CutoffExtension::around(q3, 0.1);
    const SField Psi = make_box_weight(g, q3.inflate(-0.05), q3);
    SyntheticSpec s;
    s.K = 2;
    const HField h = make_weierstrass(s, g);
    for (Nonlinearity f : {Nonlinearity::Square, Nonlinearity::Product, Nonlinearity::Cube})
        CHECK(prop21_check(h, f, Psi, c, 0.04) <= 1e-10);
    CHECK(prop21_check(HField(g), Nonlinearity::Square, Psi, c, 0.04) == 0.0);
    const SField bad = make_box_weight(g, q3, q3.inflate(0.05));
    CHECK_THROWS_AS(prop21_check(h, Nonlinearity::Square, bad, c, 0.04), PreconditionError);
    CHECK_THROWS_AS(prop21_check(h, Nonlinearity::Square, Psi, c, 0.06), PreconditionError);
}
