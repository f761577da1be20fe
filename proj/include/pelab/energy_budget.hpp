#pragma once

#include "pelab/grid.hpp"
#include "pelab/mollify.hpp"

#include <string>
#include <vector>

namespace pelab {

/// 1/2 int |u|^2.
double global_energy(const HField& u);

/// One instant of a solution: horizontal velocity, vertical velocity and pressure.
struct EnergySnapshot {
    double t = 0.0;
    HField u;
    SField w;
    SField p;  ///< pressure replicated along columns (PressureField::to_sfield)
};

struct LocalResidual {
    double timeTerm = 0.0;  ///< (<|u1|^2/2, psi> - <|u0|^2/2, psi>)/dt
    double fluxH = 0.0;     ///< <(|u|^2/2+p) u, grad_x psi>, trapezoid in time
    double fluxV = 0.0;     ///< <(|u|^2/2+p) w, d_z psi>, trapezoid in time
    double residual = 0.0;  ///< chi (timeTerm - fluxH - fluxV)
    double scale = 0.0;     ///< quadrature scale: int (|u|^2/2+|p|)(|u||grad_x psi| + |w||d_z psi|)
};

/// Tested local energy balance between two snapshots. psi must vanish on z = 0 and z = 1.
LocalResidual local_residual(const EnergySnapshot& s0, const EnergySnapshot& s1, const SField& psi, double chi = 1.0);
/// Same with one (w, p) pair used for both instants.
LocalResidual local_residual(const HField& u0, const HField& u1, double dt, const SField& w, const SField& p,
                             const SField& psi, double chi = 1.0);

struct EnergyLedger {
    std::vector<double> time, kinetic, fluxH, fluxV, residual;
    void write_csv(const std::string& path) const;
};

/// Per-instant kinetic energy and tested fluxes; residual[n] uses the pair (n-1, n), residual[0] = 0.
EnergyLedger energy_ledger(const std::vector<EnergySnapshot>& snaps, const SField& psi, double chi = 1.0);

/// Both sides of the mollified energy balance for one snapshot, with a = u^e, b = w^e, q = p^e:
///   flux - tendency = rhs1 + rhs2
/// flux = int (|a|^2/2 + q)(a . grad_x psi + b d_z psi), tendency = int psi a . d_t a with d_t a taken
/// from the mollified equation, rhs1 = -int R : grad_x(psi a), rhs2 = -int R_w . d_z(psi a),
/// R = (u (x) u)^e - a (x) a, R_w = (u w)^e - a b. All terms carry the factor chi.
struct MollifiedBalance {
    double flux = 0.0, tendency = 0.0;
    double leftSide = 0.0;  ///< flux - tendency
    double rhs1 = 0.0, rhs2 = 0.0;
    double defect() const { return leftSide - rhs1 - rhs2; }
};

MollifiedBalance mollified_balance(const HField& u, const SField& w, const SField& p, const Mollifier& m,
                                   const SField& psi, double chi = 1.0);

} // namespace pelab
