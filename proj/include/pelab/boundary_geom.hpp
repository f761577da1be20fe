#pragma once

#include "pelab/scaling.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace pelab {

/// Geometry of the unit disk-cylinder Omega = {x^2 + y^2 < 1} x (0,1), the smoothed interior
/// domain Omega_eta and the boundary functionals evaluated on analytic fields.

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& a);

enum class Wall { Side, Bottom, Top };

struct NearestPoint {
    Vec3 sigma;      ///< closest point of the boundary
    double d = 0.0;  ///< distance to it
    Vec3 N;          ///< outward unit normal at sigma
    Wall wall = Wall::Side;
    bool tie = false;  ///< another wall was within 1e-12; the side wall wins ties
};

NearestPoint nearest_boundary(const Vec3& X);

/// phi(s): quintic smoothstep from 0 at s = 1/4 to 1 at s = 1/2, max slope 7.5.
double cutoff_phi(double s);
double cutoff_phi_prime(double s);

class SmoothedCylinder {
public:
    explicit SmoothedCylinder(double eta);

    double eta() const { return eta_; }

    /// tau(s) = eta + eta (1 - (1 - (s/eta)^3)^{1/3}) on [0, eta].
    double tau(double s) const;
    double tau_prime(double s) const;
    double tau_inv(double t) const;
    double tau_inv_prime(double t) const;

    /// Lower lid omega_1 as a function of the horizontal wall distance (valid in (eta, 2 eta)).
    double omega1(double wall_distance) const;
    double omega2(double wall_distance) const { return 1.0 - omega1(wall_distance); }

    bool contains(const Vec3& X) const;

    /// Distance to the boundary of Omega_eta, negative outside, with the outward normal at the
    /// foot. near_junction flags points whose foot sits within 2e-3 eta of a joint between
    /// the flat pieces and the rounded corner.
    struct Foot {
        double d = 0.0;
        Vec3 N;
        bool near_junction = false;
    };
    Foot distance(const Vec3& X) const;

    double psi(const Vec3& X) const;
    Vec3 grad_psi(const Vec3& X) const;

    /// max eta |grad psi| over n Sobol points of the cylinder.
    double psi_grad_sup(std::size_t n = 1000000) const;

private:
    double eta_;
    // Meridian plane (r, z') with z' = min(z, 1-z): distance to the boundary curve and the
    // outward normal (nr, nz) there.
    struct Meridian {
        double d, nr, nz;
        bool junction;
    };
    Meridian meridian_distance(double r, double zr) const;
};

bool omega_eta_contains(const Vec3& X, const SmoothedCylinder& sc);
double psi_eta(const Vec3& X, const SmoothedCylinder& sc);
Vec3 grad_psi_eta(const Vec3& X, const SmoothedCylinder& sc);

/// Analytic velocity U = (u1, u2, w) and pressure p, both functions of position and time.
struct FieldTriple {
    std::string name;
    std::function<Vec3(const Vec3&, double)> U;
    std::function<double(const Vec3&, double)> p;
};

/// u -> c u, w -> c w, p -> c^2 p.
FieldTriple scaled(const FieldTriple& f, double c);

namespace triples {
/// Swirl supported in r < 1/2, 1/4 < z < 3/4.
FieldTriple interior_bump();
/// u = (x, y)(1 - r)^{2/3}, w = (z(1-z))^{2/3}, p = 1: slip with Hölder-2/3 vanishing at the wall.
FieldTriple holder_slip();
/// holder_slip with amplitude (1 + t/2).
FieldTriple holder_slip_time();
/// u = (x, y)/r, w = 0, p = 0: u.n = 1 on the side wall.
FieldTriple uniform_leakage();
/// U = (x, y, 1)/2, p = 1.
FieldTriple bounded_corner();
/// |U| = (rho^2 + rho0^2)^{-1/3} with rho the distance to the nearest corner circle, p = 1.
FieldTriple singular_corner(double rho0 = 1e-6);
/// u = (-y, x), w = 0, p = 1.
FieldTriple tangential();
} // namespace triples

struct BoundaryFlux {
    double eta = 0.0;
    double sideFlux = 0.0;      ///< (1/eta) int_{annulus (5eta/4, 3eta/2) x [0,1]} |(|u|^2/2+p) u.n|
    double verticalFlux = 0.0;  ///< (1/eta) int_{S x I_eta} |(|u|^2/2+p) w|
};

/// Nested adaptive Gauss-Kronrod in (r, z) at relative tolerance 1e-6, fixed periodic
/// trapezoid rule in the azimuth.
BoundaryFlux boundary_flux(const FieldTriple& f, double eta, double t = 0.0);

struct FluxSweep {
    std::vector<BoundaryFlux> rows;
    ScalingFit fitSide, fitVertical;
};
FluxSweep flux_sweep(const FieldTriple& f, const std::vector<double>& etas, double t = 0.0);

struct CornerRow {
    double eta = 0.0;
    double pNorm = 0.0;         ///< ||p||_{L^{3/2}(Gamma_eta)}
    double UNorm = 0.0;         ///< ||U||_{L^3(Gamma_eta)}
    double stripMeasure = 0.0;  ///< |Gamma_eta|
};

struct CornerNorms {
    std::vector<CornerRow> rows;
    ScalingFit fitP, fitU;
    double mu1 = 0.0, mu2 = 0.0;
    bool satisfied = false;  ///< mu1 + mu2 > 1 and mu2 > 1/3
};

/// Gamma_eta: points of Omega within eta of the two corner circles.
CornerNorms corner_strip_norms(const FieldTriple& f, const std::vector<double>& etas, double t = 0.0);

/// |Gamma_eta| for the unit cylinder: two quarter-disk tori, pi^2 eta^2 (1 - 4 eta/(3 pi)).
double corner_strip_measure_exact(double eta);

/// max |U.N| over a fixed lattice of points on the side wall, bottom and top at time t.
double slip_violation(const FieldTriple& f, double t = 0.0);

struct BudgetLimit {
    std::vector<double> eta, value;
    ScalingFit fit;  ///< log-log fit of |value| against eta (degenerate when all values vanish)
};

/// -int_{t1}^{t2} int_{eta/4 < d_eta < eta/2} (|u|^2/2 + p) U.N (1/eta) phi'(d_eta/eta) dX dt for each eta.
/// Throws when the slip condition is violated beyond 1e-10.
BudgetLimit global_budget_limit(const FieldTriple& f, const std::vector<double>& etas, double t1 = 0.0,
                                double t2 = 1.0);

} // namespace pelab
