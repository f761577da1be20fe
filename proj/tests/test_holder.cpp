/// @file test_holder.cpp
/// @brief Anisotropic Hölder seminorm, exponent estimates and the admissible range.

#include <doctest.h>

#include "pelab/error.hpp"
#include "pelab/holder.hpp"
#include "pelab/reference.hpp"
#include "pelab/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <utility>

using namespace pelab;

TEST_CASE("constant field has zero seminorm") {
    const Grid3 g = Grid3::channel(16, 16, 16, 1.0);
    CHECK(seminorm_aniso(SField(g, 3.0), 0.7, 0.7) == 0.0);
}

TEST_CASE("vertical seminorm of cos z against a brute-force pair scan") {
    const Grid3 g = Grid3::channel(8, 8, 32, 1.0);
    SField f(g);
    for (std::size_t c = 0; c < g.ncols(); ++c)
        for (int k = 0; k < g.nzp(); ++k) f[c * g.nzp() + k] = std::cos(g.z(k));
    HolderOptions o;
    o.z_levels = {1, 2, 4};
    o.h_levels = {1};
    const double v = seminorm_aniso(f, 0.5, 0.5, o);
    double oracle = 0.0;
    for (int d : {1, 2, 4})
        for (int a = 0; a <= g.nz(); ++a)
            for (int b = a + d; b <= g.nz(); b += d)
                if (b - a == d) oracle = std::max(oracle, std::abs(std::cos(g.z(b)) - std::cos(g.z(a))) / std::sqrt(d * g.hz()));
    CHECK(v == doctest::Approx(oracle).epsilon(1e-12));
    // sin z <= sin 1 on [0,1], so the value sits below (1/8)^{1/2}.
    CHECK(v < std::sqrt(0.125));
    CHECK(v > 0.25);
}

TEST_CASE("axis increments match the serial reference") {
    const Grid3 g = Grid3::channel(32, 32, 16, 1.0);
    SyntheticSpec s;
    s.K = 3;
    const SField f = make_weierstrass(s, g)[0];
    HolderOptions o;
    o.h_levels = {1, 2, 4};
    o.z_levels = {1, 2};
    o.diagonals = false;
    const HolderReport r = holder_report(f, 0.7, 0.7, o);
    for (std::size_t i = 0; i < o.h_levels.size(); ++i) {
        const int d = o.h_levels[i];
        const double ref = std::max(reference::max_increment(f, nullptr, d, 0, 0, 0, g.nz()),
                                    reference::max_increment(f, nullptr, 0, d, 0, 0, g.nz()));
        CHECK(r.maxIncH[i] == doctest::Approx(ref).epsilon(1e-14));
    }
    for (std::size_t i = 0; i < o.z_levels.size(); ++i)
        CHECK(r.maxIncZ[i] == doctest::Approx(reference::max_increment(f, nullptr, 0, 0, o.z_levels[i], 0, g.nz())).epsilon(1e-14));
}

TEST_CASE("seminorm under refinement of a Weierstrass field") {
    std::vector<double> right, wrong;
    for (int n : {32, 64, 128}) {
        const Grid3 g = Grid3::channel(n, n, n, 1.0);
        SyntheticSpec s;
        s.alpha = 0.7;
        s.beta = 0.7;
        s.K = max_resolvable_octave(g, 2.0);
        const HField u = make_weierstrass(s, g);
        right.push_back(seminorm_aniso(u, 0.7, 0.7));
        wrong.push_back(seminorm_aniso(u, 0.8, 0.7));
    }
    for (std::size_t i = 1; i < right.size(); ++i) {
        CHECK(right[i] / right[i - 1] <= 1.3);
        CHECK(wrong[i] / wrong[i - 1] >= std::pow(2.0, 0.1));
    }
}

TEST_CASE("exponent estimates") {
    SUBCASE("Lipschitz field") {
        const Grid3 g = Grid3::channel(64, 64, 64);
        SField f(g);
        for (std::size_t c = 0; c < g.ncols(); ++c)
            for (int k = 0; k < g.nzp(); ++k) f[c * g.nzp() + k] = std::sin(g.column_xy(c).first) + g.z(k);
        CHECK(estimate_exponents(f).alphaHat >= 0.95);
    }
    SUBCASE("Weierstrass construction exponents") {
        const Grid3 g = Grid3::channel(256, 256, 256, 1.0);
        for (auto [a, b] : {std::pair{0.5, 0.8}, std::pair{0.7, 0.5}}) {
            CAPTURE(a);
            CAPTURE(b);
            SyntheticSpec s;
            s.alpha = a;
            s.beta = b;
            s.K = max_resolvable_octave(g, 2.0);
            const ExponentEstimate e = estimate_exponents(make_weierstrass(s, g));
            CHECK(std::abs(e.alphaHat - a) <= 0.1);
            CHECK(std::abs(e.betaHat - b) <= 0.1);
        }
    }
    SUBCASE("zero field is degenerate") {
        const Grid3 g = Grid3::channel(64, 64, 64, 1.0);
        CHECK(estimate_exponents(SField(g)).degenerate);
    }
}

TEST_CASE("admissible exponent ranges") {
    CHECK(admissible(0.7, 0.7) == Regime::InteriorRange);
    CHECK(admissible(0.6, 0.7) == Regime::Inadmissible);
    CHECK(admissible(1.2, 0.45) == Regime::SmoothHorizontalRange);
    CHECK(admissible(1.2, 0.3) == Regime::Inadmissible);
    CHECK_THROWS_AS(admissible(0.7, 1.2), PreconditionError);
    CHECK(to_string(Regime::InteriorRange) != to_string(Regime::SmoothHorizontalRange));
}
