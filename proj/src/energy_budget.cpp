#include "pelab/energy_budget.hpp"

#include "pelab/commutator.hpp"
#include "pelab/error.hpp"
#include "pelab/quadrature.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace pelab {

double global_energy(const HField& u) {
    const SField& a = u[0];
    const SField& b = u[1];
    return 0.5 * integrate_fn(u.grid(), [&](std::size_t c, int k) {
        const std::size_t n = c * u.grid().nzp() + k;
        return a[n] * a[n] + b[n] * b[n];
    });
}

namespace {

// Smallest distance of the nonzero part of psi to z = 0 or z = 1 (infinite for psi = 0).
double wall_gap(const SField& psi) {
    const Grid3& g = psi.grid();
    const int nzp = g.nzp();
    double gap = kInf;
    for (std::size_t c = 0; c < g.ncols(); ++c)
        for (int k = 0; k < nzp; ++k)
            if (psi[c * nzp + k] != 0.0) gap = std::min(gap, std::min(g.z(k), 1.0 - g.z(k)));
    return gap;
}

struct PsiGrad {
    SField dx, dy, dz;
};

PsiGrad psi_gradient(const SField& psi) {
    return {horizontal_derivative(psi, HAxis::X, DerivScheme::Spectral),
            horizontal_derivative(psi, HAxis::Y, DerivScheme::Spectral), vertical_derivative4(psi)};
}

struct Pairings {
    double energy = 0.0, fluxH = 0.0, fluxV = 0.0, scale = 0.0;
};

Pairings pairings(const EnergySnapshot& s, const SField& psi, const PsiGrad& gp) {
    const Grid3& g = psi.grid();
    const int nzp = g.nzp();
    const SField& u1 = s.u[0];
    const SField& u2 = s.u[1];
    Pairings r;
    r.energy = integrate_fn(g, [&](std::size_t c, int k) {
        const std::size_t n = c * nzp + k;
        return 0.5 * (u1[n] * u1[n] + u2[n] * u2[n]) * psi[n];
    });
    r.fluxH = integrate_fn(g, [&](std::size_t c, int k) {
        const std::size_t n = c * nzp + k;
        const double h = 0.5 * (u1[n] * u1[n] + u2[n] * u2[n]) + s.p[n];
        return h * (u1[n] * gp.dx[n] + u2[n] * gp.dy[n]);
    });
    r.fluxV = integrate_fn(g, [&](std::size_t c, int k) {
        const std::size_t n = c * nzp + k;
        const double h = 0.5 * (u1[n] * u1[n] + u2[n] * u2[n]) + s.p[n];
        return h * s.w[n] * gp.dz[n];
    });
    r.scale = integrate_fn(g, [&](std::size_t c, int k) {
        const std::size_t n = c * nzp + k;
        const double h = 0.5 * (u1[n] * u1[n] + u2[n] * u2[n]) + std::abs(s.p[n]);
        return h * (std::hypot(u1[n], u2[n]) * std::hypot(gp.dx[n], gp.dy[n]) + std::abs(s.w[n] * gp.dz[n]));
    });
    return r;
}

void check_snapshot(const EnergySnapshot& s, const Grid3& g) {
    require_same_grid(s.u.grid(), g, "local_residual");
    require_same_grid(s.w.grid(), g, "local_residual");
    require_same_grid(s.p.grid(), g, "local_residual");
}

} // namespace

LocalResidual local_residual(const EnergySnapshot& s0, const EnergySnapshot& s1, const SField& psi, double chi) {
    const Grid3& g = psi.grid();
    check_snapshot(s0, g);
    check_snapshot(s1, g);
    const double dt = s1.t - s0.t;
    require(dt > 0.0, "local_residual: snapshots must be ordered in time");
    require(wall_gap(psi) > 0.0, "local_residual: psi must vanish on z = 0 and z = 1");
    const PsiGrad gp = psi_gradient(psi);
    const Pairings a = pairings(s0, psi, gp);
    const Pairings b = pairings(s1, psi, gp);
    LocalResidual r;
    r.timeTerm = (b.energy - a.energy) / dt;
    r.fluxH = 0.5 * (a.fluxH + b.fluxH);
    r.fluxV = 0.5 * (a.fluxV + b.fluxV);
    r.residual = chi * (r.timeTerm - r.fluxH - r.fluxV);
    r.scale = std::abs(chi) * 0.5 * (a.scale + b.scale);
    return r;
}

LocalResidual local_residual(const HField& u0, const HField& u1, double dt, const SField& w, const SField& p,
                             const SField& psi, double chi) {
    EnergySnapshot s0{0.0, u0, w, p};
    EnergySnapshot s1{dt, u1, w, p};
    return local_residual(s0, s1, psi, chi);
}

void EnergyLedger::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "t,kinetic,fluxH,fluxV,residual\n" << std::setprecision(17);
    for (std::size_t n = 0; n < time.size(); ++n)
        os << time[n] << ',' << kinetic[n] << ',' << fluxH[n] << ',' << fluxV[n] << ',' << residual[n] << '\n';
    if (!os) throw Error("write failed: " + path);
}

EnergyLedger energy_ledger(const std::vector<EnergySnapshot>& snaps, const SField& psi, double chi) {
    EnergyLedger L;
    if (snaps.empty()) return L;
    require(wall_gap(psi) > 0.0, "energy_ledger: psi must vanish on z = 0 and z = 1");
    const PsiGrad gp = psi_gradient(psi);
    std::vector<Pairings> pr;
    for (const auto& s : snaps) {
        check_snapshot(s, psi.grid());
        pr.push_back(pairings(s, psi, gp));
        L.time.push_back(s.t);
        L.kinetic.push_back(global_energy(s.u));
        L.fluxH.push_back(pr.back().fluxH);
        L.fluxV.push_back(pr.back().fluxV);
    }
    L.residual.push_back(0.0);
    for (std::size_t n = 1; n < snaps.size(); ++n) {
        const double dt = snaps[n].t - snaps[n - 1].t;
        require(dt > 0.0, "energy_ledger: snapshots must be ordered in time");
        const double tt = (pr[n].energy - pr[n - 1].energy) / dt;
        L.residual.push_back(chi * (tt - 0.5 * (pr[n].fluxH + pr[n - 1].fluxH) - 0.5 * (pr[n].fluxV + pr[n - 1].fluxV)));
    }
    return L;
}

MollifiedBalance mollified_balance(const HField& u, const SField& w, const SField& p, const Mollifier& m,
                                   const SField& psi, double chi) {
    const Grid3& g = u.grid();
    require_same_grid(w.grid(), g, "mollified_balance");
    require_same_grid(p.grid(), g, "mollified_balance");
    require_same_grid(psi.grid(), g, "mollified_balance");
    if (wall_gap(psi) < 2.0 * m.eps - 1e-12) {
        std::ostringstream os;
        os << "mollified_balance: psi support reaches " << wall_gap(psi) << " from the wall, need 2*eps = " << 2 * m.eps;
        throw PreconditionError(os.str());
    }
    const auto DX = [](const SField& f) { return horizontal_derivative(f, HAxis::X, DerivScheme::Spectral); };
    const auto DY = [](const SField& f) { return horizontal_derivative(f, HAxis::Y, DerivScheme::Spectral); };

    MollifyOperator op(g, m);
    const SField a1 = op(u[0]), a2 = op(u[1]), b = op(w), q = op(p);
    const SField m11 = op(u[0] * u[0]), m12 = op(u[0] * u[1]), m22 = op(u[1] * u[1]);
    const SField n1 = op(u[0] * w), n2 = op(u[1] * w);

    const PsiGrad gp = psi_gradient(psi);
    const SField pa1 = psi * a1, pa2 = psi * a2;
    const SField g11 = DX(pa1), g12 = DY(pa1), g21 = DX(pa2), g22 = DY(pa2);
    const SField z1 = vertical_derivative4(pa1), z2 = vertical_derivative4(pa2);

    // d_t a_i = -(d_j (u_i u_j)^e + d_z (u_i w)^e + d_i q)
    const SField f1 = DX(m11) + DY(m12) + vertical_derivative4(n1) + DX(q);
    const SField f2 = DX(m12) + DY(m22) + vertical_derivative4(n2) + DY(q);

    const int nzp = g.nzp();
    MollifiedBalance r;
    r.flux = chi * integrate_fn(g, [&](std::size_t c, int k) {
        const std::size_t n = c * nzp + k;
        const double h = 0.5 * (a1[n] * a1[n] + a2[n] * a2[n]) + q[n];
        return h * (a1[n] * gp.dx[n] + a2[n] * gp.dy[n] + b[n] * gp.dz[n]);
    });
    r.tendency = -chi * integrate_fn(g, [&](std::size_t c, int k) {
        const std::size_t n = c * nzp + k;
        return psi[n] * (a1[n] * f1[n] + a2[n] * f2[n]);
    });
    r.leftSide = r.flux - r.tendency;
    r.rhs1 = -chi * integrate_fn(g, [&](std::size_t c, int k) {
        const std::size_t n = c * nzp + k;
        const double r11 = m11[n] - a1[n] * a1[n], r12 = m12[n] - a1[n] * a2[n], r22 = m22[n] - a2[n] * a2[n];
        return r11 * g11[n] + r12 * (g12[n] + g21[n]) + r22 * g22[n];
    });
    r.rhs2 = -chi * integrate_fn(g, [&](std::size_t c, int k) {
        const std::size_t n = c * nzp + k;
        return (n1[n] - a1[n] * b[n]) * z1[n] + (n2[n] - a2[n] * b[n]) * z2[n];
    });
    return r;
}

} // namespace pelab
