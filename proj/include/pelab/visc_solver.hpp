#pragma once

#include "pelab/grid.hpp"
#include "pelab/holder.hpp"
#include "pelab/scaling.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pelab {

/// Viscous primitive equations on an x-z slice, periodic in x with period `period`, z in [0,1]:
///   d_t u + d_x(u u) + d_z(u w) + d_x p = nu (d_xx u + d_zz u),  w = -int_0^z d_x u,
/// no-slip at z = 0 and stress-free at z = 1. Energies are per unit length in y.
struct ViscRunConfig {
    double nu = 0.1;
    int nx = 32, nz = 64;
    double period = 6.283185307179586;
    double dt = 0.0;  ///< 0 picks half the initial stability limit
    double tEnd = 1.0;
    std::string initialField = "smooth";  ///< smooth | eigenmode | zero
    std::uint64_t seed = 1;
    double amplitude = 1.0;
    bool advection = true;  ///< test switch: false gives pure diffusion
    int snapshotEvery = 0;  ///< keep every n-th state for regularity_monitor (0 = none)
};

/// Rejects bad sizes and stability-limit violations for the initial state.
void validate(const ViscRunConfig& c);

struct ViscState {
    double t = 0.0;
    long step = 0;
    SField u;  ///< on Grid3::channel(nx, 1, nz, period)
    SField w;
    double dissipationRate = 0.0;  ///< nu (|d_x u|^2 + |d_z u|^2) of the last step's diffusion midpoint
};

ViscState initial_state(const ViscRunConfig& c);

/// 1/2 int int u^2 dx dz.
double slice_energy(const SField& u);
/// max_x |d_x int_0^1 u dz|.
double barotropic_defect(const SField& u);

/// Largest dt satisfying dt <= 0.25 min(hx^2, hz^2)/nu and dt <= 0.5 hx/max|u| (and the vertical analogue).
double stable_dt(const ViscRunConfig& c, const ViscState& s);

/// One step: explicit advection (SSP-RK3, projected each stage), then Crank-Nicolson diffusion
/// with the z-independent pressure chosen so the column mean stays divergence free.
ViscState step(const ViscState& s, const ViscRunConfig& c);

struct DissipationLedger {
    std::vector<double> t, energy, dissipRate, cumDissip, defect;
    void write_csv(const std::string& path) const;
};

struct ViscRun {
    DissipationLedger ledger;
    ViscState final;
    std::vector<ViscState> snapshots;
    double dt = 0.0;
};

/// Advances to tEnd; throws NumericalGuard when the energy inequality fails by more than
/// 1e-6 E(0) in a step, on CFL violation or on non-finite values.
ViscRun run(const ViscRunConfig& c);

struct SweepRow {
    double nu = 0.0;
    double totalDissipation = 0.0;
    double finalEnergy = 0.0;
    double initialEnergy = 0.0;
    double maxDefect = 0.0;  ///< max_t |E(0) - E(t) - cumulative dissipation|
};

struct ViscositySweep {
    std::vector<SweepRow> rows;
    bool monotone = false;  ///< dissipation strictly decreases along the (decreasing) nu list
    ScalingFit fit;         ///< dissipation against nu
};

/// Runs base with each nu; refuses under-resolved cases (sqrt(nu tEnd) < 4 hz).
ViscositySweep viscosity_sweep(const ViscRunConfig& base, const std::vector<double>& nus);

struct RegularitySeries {
    std::vector<double> t, seminorm;
    double aggregate = 0.0;  ///< trapezoid integral of seminorm^3 in time
};

RegularitySeries regularity_monitor(const std::vector<ViscState>& states, double alpha, double beta,
                                    const HolderOptions& o = {});

} // namespace pelab
