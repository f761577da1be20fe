/// @file test_visc_solver.cpp
/// @brief Viscous slice solver: boundary conditions, energy budget and the viscosity sweep.

#include <doctest.h>

#include "pelab/error.hpp"
#include "pelab/visc_solver.hpp"

#include <cmath>
#include <numbers>

using namespace pelab;

namespace {
constexpr double kPi = std::numbers::pi;

// Smallest eigenvalue of -d_zz with u(0) = 0, u'(1) = 0 by bisection on the shooting residual cos(sqrt(l)).
double first_eigenvalue() {
    double a = 1.0, b = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        (std::cos(std::sqrt(m)) > 0 ? a : b) = m;
    }
    return 0.5 * (a + b);
}
} // namespace

TEST_CASE("configuration validation") {
    ViscRunConfig c;
    c.nx = 2;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.nu = -1;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.initialField = "vortex";
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = {};
    c.dt = 1.0;
    CHECK_THROWS_AS(run(c), ConfigError);
    CHECK_NOTHROW(validate(ViscRunConfig{}));
}

TEST_CASE("zero data stays zero") {
    ViscRunConfig c;
    c.initialField = "zero";
    c.tEnd = 0.05;
    const ViscRun r = run(c);
    CHECK(r.final.u.max_abs() == 0.0);
    for (double d : r.ledger.cumDissip) CHECK(d == 0.0);
}

TEST_CASE("initial data meets the boundary conditions and the column constraint") {
    ViscRunConfig c;
    const ViscState s = initial_state(c);
    const Grid3& g = s.u.grid();
    for (int i = 0; i < g.nx(); ++i) {
        CHECK(s.u(i, 0, 0) == 0.0);
        // Stress-free lid: one-sided slope is O(hz).
        CHECK(std::abs(s.u(i, 0, g.nz()) - s.u(i, 0, g.nz() - 1)) <= 50 * g.hz() * g.hz());
    }
    CHECK(barotropic_defect(s.u) <= 1e-10);
    const ViscState s2 = step(s, [&] {
        ViscRunConfig d = c;
        d.dt = 0.5 * stable_dt(c, s);
        return d;
    }());
    CHECK(barotropic_defect(s2.u) <= 1e-10);
    for (int i = 0; i < g.nx(); ++i) CHECK(s2.u(i, 0, 0) == 0.0);
}

TEST_CASE("pure diffusion of the first eigenmode") {
    CHECK(first_eigenvalue() == doctest::Approx(kPi * kPi / 4).epsilon(1e-12));
    ViscRunConfig c;
    c.nu = 1.0;
    c.nx = 8;
    c.nz = 128;
    c.tEnd = 0.1;
    c.initialField = "eigenmode";
    c.advection = false;
    const ViscRun r = run(c);
    const double amp = r.final.u(3, 0, c.nz);
    CHECK(std::abs(amp - std::exp(-first_eigenvalue() * 0.1)) <= 1e-3);
    CHECK(amp == doctest::Approx(0.7814).epsilon(1e-3));
    const double E0 = r.ledger.energy.front();
    const double total = r.ledger.cumDissip.back();
    CHECK(total == doctest::Approx(E0 * (1 - std::exp(-2 * first_eigenvalue() * 0.1))).epsilon(1e-3));
}

TEST_CASE("energy budget closes and the inequality holds every step") {
    ViscRunConfig c;
    c.nu = 0.1;
    c.tEnd = 1.0;
    const ViscRun r = run(c);
    const double E0 = r.ledger.energy.front();
    double worst = 0;
    for (std::size_t n = 0; n < r.ledger.t.size(); ++n) {
        worst = std::max(worst, std::abs(r.ledger.defect[n]));
        CHECK(r.ledger.energy[n] <= E0 * (1 + 1e-6));
        if (n > 0) CHECK(r.ledger.energy[n] + r.dt * r.ledger.dissipRate[n] <= r.ledger.energy[n - 1] + 1e-6 * E0);
    }
    CHECK(worst <= 1e-4 * E0);
    CHECK(r.ledger.t.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inviscid advection conserves energy over a short time") {
    ViscRunConfig c;
    c.nu = 0.0;
    c.tEnd = 0.2;
    const ViscRun r = run(c);
    CHECK(std::abs(r.ledger.energy.back() - r.ledger.energy.front()) <= 1e-4 * r.ledger.energy.front());
}

TEST_CASE("stability guard") {
    ViscRunConfig c;
    ViscState s = initial_state(c);
    c.dt = 2 * stable_dt(c, s);
    CHECK_THROWS_AS(step(s, c), NumericalGuard);
}

TEST_CASE("viscosity sweep") {
    ViscRunConfig c;
    c.tEnd = 0.5;
    const ViscositySweep sw = viscosity_sweep(c, {0.4, 0.2, 0.1, 0.05});
    CHECK(sw.monotone);
    for (const auto& row : sw.rows) {
        CHECK(row.totalDissipation > 0);
        CHECK(row.maxDefect <= 1e-4 * row.initialEnergy);
    }
    CHECK(sw.fit.slope > 0);
    CHECK_THROWS_AS(viscosity_sweep(c, {0.4, 0.2, 0.1}), PreconditionError);
    CHECK_THROWS_AS(viscosity_sweep(c, {0.1, 0.2, 0.3, 0.4}), PreconditionError);
    CHECK_THROWS_AS(viscosity_sweep(c, {0.4, 0.2, 0.1, 0.001}), PreconditionError);

    c.initialField = "zero";
    const ViscositySweep z = viscosity_sweep(c, {0.4, 0.2, 0.1, 0.05});
    for (const auto& row : z.rows) CHECK(row.totalDissipation == 0.0);
}

TEST_CASE("regularity monitor") {
    ViscRunConfig c;
    c.nu = 0.5;
    c.nz = 64;
    c.tEnd = 0.2;
    c.initialField = "eigenmode";
    c.advection = false;
    c.snapshotEvery = 50;
    const ViscRun r = run(c);
    REQUIRE(r.snapshots.size() >= 3);
    HolderOptions o;
    o.h_levels = {1, 2};
    o.z_levels = {1, 2, 4, 8};
    const RegularitySeries s = regularity_monitor(r.snapshots, 0.7, 0.7, o);
    for (std::size_t i = 1; i < s.seminorm.size(); ++i) CHECK(s.seminorm[i] < s.seminorm[i - 1]);
    CHECK(s.aggregate > 0);

    c.initialField = "zero";
    const ViscRun z = run(c);
    CHECK(regularity_monitor(z.snapshots, 0.7, 0.7, o).aggregate == 0.0);
}
