#include "pelab/boundary_geom.hpp"

#include "pelab/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace pelab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kAzimuth = 16;  // trapezoid nodes in the azimuth

double bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

// One 15-point Kronrod / 7-point Gauss pair on [a, b].
template <class F>
void gk_panel(F& f, double a, double b, double& K, double& err, double& L1) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double f0 = f(m);
    double k = wk[0] * f0, g = wg[0] * f0, l = wk[0] * std::abs(f0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(m + h * x[i]), fm = f(m - h * x[i]);
        k += wk[i] * (fp + fm);
        l += wk[i] * (std::abs(fp) + std::abs(fm));
        if (i % 2 == 0) g += wg[i / 2] * (fp + fm);
    }
    K = h * k;
    err = h * std::abs(k - g);
    L1 = h * l;
}

template <class F>
void gk_adapt(F& f, double a, double b, double abs_tol_per_len, int depth, double& I, double& E, double& L) {
    double K, err, L1;
    gk_panel(f, a, b, K, err, L1);
    if (err <= abs_tol_per_len * (b - a) || depth == 0) {
        I += K;
        E += err;
        L += L1;
        return;
    }
    const double m = 0.5 * (a + b);
    gk_adapt(f, a, m, abs_tol_per_len, depth - 1, I, E, L);
    gk_adapt(f, m, b, abs_tol_per_len, depth - 1, I, E, L);
}

// Adaptive Gauss-Kronrod to relative tolerance tol (against the L1 norm of the integrand),
// with a convergence check; errors below abs_floor are accepted (integrands that vanish up
// to roundoff have no meaningful relative error).
template <class F>
double gk(F&& f, double a, double b, double tol, const char* what, double abs_floor = 0.0) {
    if (!(b > a)) return 0.0;
    double K0, e0, L0;
    gk_panel(f, a, b, K0, e0, L0);
    double I = 0.0, E = 0.0, L = 0.0;
    gk_adapt(f, a, b, std::max(tol * L0, 0.1 * abs_floor) / (b - a), 20, I, E, L);
    if (!std::isfinite(I) || (E > 10.0 * tol * L && E > abs_floor)) {
        std::ostringstream os;
        os << what << ": adaptive quadrature did not converge on [" << a << ", " << b << "], error estimate " << E
           << " vs L1 " << L;
        throw NumericalGuard(os.str());
    }
    return I;
}

// 2 pi times the azimuthal mean of g(cos, sin).
template <class G>
double azimuth(G&& g) {
    double s = 0.0;
    for (int j = 0; j < kAzimuth; ++j) {
        const double th = 2.0 * kPi * (j + 0.5) / kAzimuth;
        s += g(std::cos(th), std::sin(th));
    }
    return 2.0 * kPi * s / kAzimuth;
}

double horizontal_energy_density(const Vec3& U, double p) { return 0.5 * (U.x * U.x + U.y * U.y) + p; }

} // namespace

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

NearestPoint nearest_boundary(const Vec3& X) {
    const double r = std::hypot(X.x, X.y);
    require(r <= 1.0 + 1e-12 && X.z >= -1e-12 && X.z <= 1.0 + 1e-12, "nearest_boundary: point outside the cylinder");
    const double ds = 1.0 - r, db = X.z, dt = 1.0 - X.z;
    NearestPoint np;
    const double dmin = std::min({ds, db, dt});
    int hits = (std::abs(ds - dmin) <= 1e-12) + (std::abs(db - dmin) <= 1e-12) + (std::abs(dt - dmin) <= 1e-12);
    np.tie = hits > 1;
    if (std::abs(ds - dmin) <= 1e-12) {
        require(r > 1e-6, "nearest_boundary: side-wall projection undefined on the axis");
        np.wall = Wall::Side;
        np.d = ds;
        np.N = {X.x / r, X.y / r, 0.0};
        np.sigma = {X.x / r, X.y / r, X.z};
    } else if (std::abs(db - dmin) <= 1e-12) {
        np.wall = Wall::Bottom;
        np.d = db;
        np.N = {0.0, 0.0, -1.0};
        np.sigma = {X.x, X.y, 0.0};
    } else {
        np.wall = Wall::Top;
        np.d = dt;
        np.N = {0.0, 0.0, 1.0};
        np.sigma = {X.x, X.y, 1.0};
    }
    return np;
}

double cutoff_phi(double s) {
    const double t = std::clamp((s - 0.25) * 4.0, 0.0, 1.0);
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double cutoff_phi_prime(double s) {
    if (s <= 0.25 || s >= 0.5) return 0.0;
    const double t = (s - 0.25) * 4.0;
    return 4.0 * 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

SmoothedCylinder::SmoothedCylinder(double eta) : eta_(eta) {
    if (!(eta > 0.0 && eta < 0.125)) throw PreconditionError("SmoothedCylinder: eta must lie in (0, 1/8)");
}

double SmoothedCylinder::tau(double s) const {
    const double a = std::clamp(s / eta_, 0.0, 1.0);
    return eta_ + eta_ * (1.0 - std::cbrt(1.0 - a * a * a));
}

double SmoothedCylinder::tau_prime(double s) const {
    const double a = std::clamp(s / eta_, 0.0, 1.0);
    return a * a / std::pow(1.0 - a * a * a, 2.0 / 3.0);
}

double SmoothedCylinder::tau_inv(double t) const {
    const double b = std::clamp((t - eta_) / eta_, 0.0, 1.0);
    const double c = 1.0 - b;
    return eta_ * std::cbrt(1.0 - c * c * c);
}

double SmoothedCylinder::tau_inv_prime(double t) const {
    const double b = std::clamp((t - eta_) / eta_, 0.0, 1.0);
    const double c = 1.0 - b;
    return c * c / std::pow(1.0 - c * c * c, 2.0 / 3.0);
}

double SmoothedCylinder::omega1(double wd) const {
    require(wd >= eta_ && wd <= 2.0 * eta_, "omega1: wall distance outside [eta, 2 eta]");
    return tau(2.0 * eta_ - wd);
}

bool SmoothedCylinder::contains(const Vec3& X) const {
    const double wd = 1.0 - std::hypot(X.x, X.y);
    if (wd > 2.0 * eta_) return X.z > eta_ && X.z < 1.0 - eta_;
    if (wd > eta_) {
        const double w1 = tau(2.0 * eta_ - wd);
        return X.z > w1 && X.z < 1.0 - w1;
    }
    return false;
}

SmoothedCylinder::Meridian SmoothedCylinder::meridian_distance(double r, double zr) const {
    const double rc = 1.0 - 2.0 * eta_, zc = 2.0 * eta_, re = 1.0 - eta_;
    Meridian best{std::numeric_limits<double>::infinity(), 0.0, 0.0, false};
    if (r <= rc) best = {std::abs(zr - eta_), 0.0, -1.0, false};
    if (zr >= zc) {
        const double d = std::abs(re - r);
        if (d < best.d) best = {d, 1.0, 0.0, false};
    }
    // Rounded corner (r - rc)^3 + (zc - z)^3 = eta^3, parametrized by its normal angle.
    const auto point = [&](double th) {
        const double c = std::cos(th), s = std::sin(th);
        const double k = eta_ / std::cbrt(std::pow(c, 1.5) + std::pow(s, 1.5));
        return std::pair<double, double>{rc + k * std::sqrt(c), zc - k * std::sqrt(s)};
    };
    const auto dist2 = [&](double th) {
        const auto [pr, pz] = point(th);
        return (r - pr) * (r - pr) + (zr - pz) * (zr - pz);
    };
    constexpr int ns = 32;
    int jb = 0;
    double fb = dist2(0.0);
    for (int j = 1; j <= ns; ++j) {
        const double f = dist2(0.5 * kPi * j / ns);
        if (f < fb) fb = f, jb = j;
    }
    const double lo = 0.5 * kPi * std::max(jb - 1, 0) / ns, hi = 0.5 * kPi * std::min(jb + 1, ns) / ns;
    std::uintmax_t iters = 200;
    const auto m = boost::math::tools::brent_find_minima(dist2, lo, hi, 45, iters);
    const double darc = std::sqrt(std::max(m.second, 0.0));
    if (darc < best.d) best = {darc, std::cos(m.first), -std::sin(m.first), false};
    best.junction = std::abs(r - rc) < 2e-3 * eta_ || std::abs(zr - zc) < 2e-3 * eta_;
    return best;
}

SmoothedCylinder::Foot SmoothedCylinder::distance(const Vec3& X) const {
    const double r = std::hypot(X.x, X.y);
    const bool top = X.z > 0.5;
    const double zr = top ? 1.0 - X.z : X.z;
    const Meridian m = meridian_distance(r, zr);
    Foot f;
    f.d = contains(X) ? m.d : -m.d;
    const double cx = r > 1e-14 ? X.x / r : 1.0, cy = r > 1e-14 ? X.y / r : 0.0;
    f.N = {m.nr * cx, m.nr * cy, top ? -m.nz : m.nz};
    f.near_junction = m.junction;
    return f;
}

double SmoothedCylinder::psi(const Vec3& X) const { return cutoff_phi(distance(X).d / eta_); }

Vec3 SmoothedCylinder::grad_psi(const Vec3& X) const {
    const Foot f = distance(X);
    const double s = f.d / eta_;
    if (s <= 0.25 || s >= 0.5) return {};
    if (f.near_junction) {
        const double h = 1e-4 * eta_;
        const auto c = [&](Vec3 a, Vec3 b) { return (psi(a) - psi(b)) / (2.0 * h); };
        return {c({X.x + h, X.y, X.z}, {X.x - h, X.y, X.z}), c({X.x, X.y + h, X.z}, {X.x, X.y - h, X.z}),
                c({X.x, X.y, X.z + h}, {X.x, X.y, X.z - h})};
    }
    const double g = -cutoff_phi_prime(s) / eta_;
    return {g * f.N.x, g * f.N.y, g * f.N.z};
}

double SmoothedCylinder::psi_grad_sup(std::size_t n) const {
    boost::random::sobol qrng(3);
    std::vector<Vec3> pts(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u1 = std::ldexp(static_cast<double>(qrng()), -64);
        const double u2 = std::ldexp(static_cast<double>(qrng()), -64);
        const double u3 = std::ldexp(static_cast<double>(qrng()), -64);
        const double r = std::sqrt(u1), th = 2.0 * kPi * u2;
        pts[i] = {r * std::cos(th), r * std::sin(th), u3};
    }
    double m = 0.0;
#pragma omp parallel for schedule(dynamic, 4096) reduction(max : m)
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, norm(grad_psi(pts[i])));
    return m * eta_;
}

bool omega_eta_contains(const Vec3& X, const SmoothedCylinder& sc) { return sc.contains(X); }
double psi_eta(const Vec3& X, const SmoothedCylinder& sc) { return sc.psi(X); }
Vec3 grad_psi_eta(const Vec3& X, const SmoothedCylinder& sc) { return sc.grad_psi(X); }

FieldTriple scaled(const FieldTriple& f, double c) {
    FieldTriple g;
    g.name = f.name;
    g.U = [U = f.U, c](const Vec3& X, double t) {
        const Vec3 v = U(X, t);
        return Vec3{c * v.x, c * v.y, c * v.z};
    };
    g.p = [p = f.p, c](const Vec3& X, double t) { return c * c * p(X, t); };
    return g;
}

namespace triples {

FieldTriple interior_bump() {
    const auto amp = [](const Vec3& X) { return bump(std::hypot(X.x, X.y) / 0.5) * bump((X.z - 0.5) / 0.25); };
    return {"interior-bump",
            [amp](const Vec3& X, double) {
                const double b = amp(X);
                return Vec3{b * (0.3 * X.x - X.y), b * (X.x + 0.3 * X.y), 0.2 * b};
            },
            [amp](const Vec3& X, double) { return amp(X); }};
}

namespace {
Vec3 holder_velocity(const Vec3& X) {
    const double r = std::hypot(X.x, X.y);
    const double s = std::pow(std::max(1.0 - r, 0.0), 2.0 / 3.0);
    const double zz = std::max(X.z * (1.0 - X.z), 0.0);
    return {X.x * s, X.y * s, std::pow(zz, 2.0 / 3.0)};
}
} // namespace

FieldTriple holder_slip() {
    return {"holder-slip", [](const Vec3& X, double) { return holder_velocity(X); },
            [](const Vec3&, double) { return 1.0; }};
}

FieldTriple holder_slip_time() {
    return {"holder-slip-time",
            [](const Vec3& X, double t) {
                const Vec3 v = holder_velocity(X);
                const double a = 1.0 + 0.5 * t;
                return Vec3{a * v.x, a * v.y, a * v.z};
            },
            [](const Vec3&, double t) { return 1.0 + 0.25 * t; }};
}

FieldTriple uniform_leakage() {
    return {"uniform-leakage",
            [](const Vec3& X, double) {
                const double r = std::hypot(X.x, X.y);
                return r > 0.0 ? Vec3{X.x / r, X.y / r, 0.0} : Vec3{1.0, 0.0, 0.0};
            },
            [](const Vec3&, double) { return 0.0; }};
}

FieldTriple bounded_corner() {
    return {"bounded-corner", [](const Vec3& X, double) { return Vec3{0.5 * X.x, 0.5 * X.y, 0.5}; },
            [](const Vec3&, double) { return 1.0; }};
}

FieldTriple singular_corner(double rho0) {
    return {"singular-corner",
            [rho0](const Vec3& X, double) {
                const double dr = 1.0 - std::hypot(X.x, X.y);
                const double rho = std::min(std::hypot(dr, X.z), std::hypot(dr, 1.0 - X.z));
                return Vec3{0.0, 0.0, std::pow(rho * rho + rho0 * rho0, -1.0 / 3.0)};
            },
            [](const Vec3&, double) { return 1.0; }};
}

FieldTriple tangential() {
    return {"tangential", [](const Vec3& X, double) { return Vec3{-X.y, X.x, 0.0}; },
            [](const Vec3&, double) { return 1.0; }};
}

} // namespace triples

BoundaryFlux boundary_flux(const FieldTriple& f, double eta, double t) {
    require(eta > 0.0 && eta <= 0.125, "boundary_flux: eta must lie in (0, 1/8]");
    constexpr double tol = 1e-6, tin = 1e-9;
    BoundaryFlux b;
    b.eta = eta;
    const auto side_density = [&](double r, double z) {
        return r * azimuth([&](double c, double s) {
                   const Vec3 X{r * c, r * s, z};
                   const Vec3 U = f.U(X, t);
                   return std::abs(horizontal_energy_density(U, f.p(X, t)) * (U.x * c + U.y * s));
               });
    };
    b.sideFlux = gk([&](double r) { return gk([&](double z) { return side_density(r, z); }, 0.0, 1.0, tin, "boundary_flux"); },
                    1.0 - 1.5 * eta, 1.0 - 1.25 * eta, tol, "boundary_flux") /
                 eta;
    const auto vert_density = [&](double r, double z) {
        return r * azimuth([&](double c, double s) {
                   const Vec3 X{r * c, r * s, z};
                   const Vec3 U = f.U(X, t);
                   return std::abs(horizontal_energy_density(U, f.p(X, t)) * U.z);
               });
    };
    const auto layer = [&](double z0, double z1) {
        return gk([&](double r) { return gk([&](double z) { return vert_density(r, z); }, z0, z1, tin, "boundary_flux"); },
                  0.0, 1.0, tol, "boundary_flux");
    };
    b.verticalFlux = (layer(eta, 2.0 * eta) + layer(1.0 - 2.0 * eta, 1.0 - eta)) / eta;
    return b;
}

FluxSweep flux_sweep(const FieldTriple& f, const std::vector<double>& etas, double t) {
    FluxSweep s;
    std::vector<double> side, vert;
    for (double e : etas) {
        s.rows.push_back(boundary_flux(f, e, t));
        side.push_back(s.rows.back().sideFlux);
        vert.push_back(s.rows.back().verticalFlux);
    }
    s.fitSide = fit_loglog(etas, side);
    s.fitVertical = fit_loglog(etas, vert);
    return s;
}

double corner_strip_measure_exact(double eta) { return kPi * kPi * eta * eta * (1.0 - 4.0 * eta / (3.0 * kPi)); }

CornerNorms corner_strip_norms(const FieldTriple& f, const std::vector<double>& etas, double t) {
    require(etas.size() >= 4, "corner_strip_norms: need an eta sweep of at least 4 values");
    CornerNorms out;
    std::vector<double> pn, un;
    for (double eta : etas) {
        require(eta > 0.0 && eta <= 0.125, "corner_strip_norms: eta must lie in (0, 1/8]");
        // Polar coordinates (rho, a) about each corner circle; r = 1 - rho cos a.
        const auto strip = [&](auto&& g) {
            double total = 0.0;
            for (int corner = 0; corner < 2; ++corner) {
                const auto inner = [&](double rho) {
                    return gk(
                        [&](double a) {
                            const double r = 1.0 - rho * std::cos(a);
                            const double z = corner == 0 ? rho * std::sin(a) : 1.0 - rho * std::sin(a);
                            return rho * r * azimuth([&](double c, double s) { return g(Vec3{r * c, r * s, z}); });
                        },
                        0.0, 0.5 * kPi, 1e-6, "corner_strip_norms");
                };
                // rho = eta e^{-s}: integrands singular at the corner become smooth in s. The range
                // stops at rho = 1e-8, below which 1 - r loses its digits.
                total += gk([&](double sv) {
                    const double rho = eta * std::exp(-sv);
                    return rho * inner(rho);
                }, 0.0, std::log(eta / 1e-8), 1e-6, "corner_strip_norms");
            }
            return total;
        };
        CornerRow row;
        row.eta = eta;
        row.stripMeasure = strip([](const Vec3&) { return 1.0; });
        row.pNorm = std::pow(strip([&](const Vec3& X) { return std::pow(std::abs(f.p(X, t)), 1.5); }), 2.0 / 3.0);
        row.UNorm = std::cbrt(strip([&](const Vec3& X) {
            const double u = norm(f.U(X, t));
            return u * u * u;
        }));
        out.rows.push_back(row);
        pn.push_back(row.pNorm);
        un.push_back(row.UNorm);
    }
    out.fitP = fit_loglog(etas, pn);
    out.fitU = fit_loglog(etas, un);
    out.mu1 = out.fitP.slope;
    out.mu2 = out.fitU.slope;
    out.satisfied = !out.fitP.degenerate && !out.fitU.degenerate && out.mu1 + out.mu2 > 1.0 && out.mu2 > 1.0 / 3.0;
    return out;
}

double slip_violation(const FieldTriple& f, double t) {
    double m = 0.0;
    for (int j = 0; j < kAzimuth; ++j) {
        const double th = 2.0 * kPi * (j + 0.5) / kAzimuth, c = std::cos(th), s = std::sin(th);
        for (int k = 0; k <= 16; ++k) {
            const Vec3 X{c, s, k / 16.0};
            m = std::max(m, std::abs(dot(f.U(X, t), Vec3{c, s, 0.0})));
        }
        for (int k = 0; k <= 4; ++k) {
            const double r = k / 4.0;
            m = std::max(m, std::abs(f.U(Vec3{r * c, r * s, 0.0}, t).z));
            m = std::max(m, std::abs(f.U(Vec3{r * c, r * s, 1.0}, t).z));
        }
    }
    return m;
}

BudgetLimit global_budget_limit(const FieldTriple& f, const std::vector<double>& etas, double t1, double t2) {
    require(t2 > t1, "global_budget_limit: need t2 > t1");
    using GL = boost::math::quadrature::gauss<double, 7>;
    const double hw = 0.5 * (t2 - t1), mid = 0.5 * (t1 + t2);
    std::vector<double> tn, tw;
    for (std::size_t q = 0; q < GL::abscissa().size(); ++q) {
        const double x = GL::abscissa()[q], w = GL::weights()[q];
        tn.push_back(mid - hw * x);
        tw.push_back(hw * w);
        if (x != 0.0) {
            tn.push_back(mid + hw * x);
            tw.push_back(hw * w);
        }
    }
    for (double t : tn) {
        const double v = slip_violation(f, t);
        if (v > 1e-10) {
            std::ostringstream os;
            os << "global_budget_limit: slip condition violated, max |U.N| = " << v << " on the boundary";
            throw PreconditionError(os.str());
        }
    }
    constexpr double tol = 1e-7, tin = 1e-9;
    BudgetLimit out;
    for (double eta : etas) {
        require(eta > 0.0 && eta < 0.125, "global_budget_limit: eta must lie in (0, 1/8)");
        const double rc = 1.0 - 2.0 * eta, zc = 2.0 * eta, re = 1.0 - eta;
        // The band eta/4 < d_eta < eta/2 in normal coordinates (foot, depth d) about the boundary
        // of Omega_eta: flat bottom, rounded corner (normal angle th), flat side; both halves.
        const auto term = [&](double t) {
            // Azimuthal integral at meridian point (r, zr) with meridian outward normal (nr, nz).
            const auto ring = [&](double r, double zr, double nr, double nz, double d, bool top) {
                const double ph = cutoff_phi_prime(d / eta);
                if (ph == 0.0) return 0.0;
                return r * azimuth([&](double c, double s) {
                           const Vec3 X{r * c, r * s, top ? 1.0 - zr : zr};
                           const Vec3 N{nr * c, nr * s, top ? -nz : nz};
                           const Vec3 U = f.U(X, t);
                           return horizontal_energy_density(U, f.p(X, t)) * dot(U, N) * ph / eta;
                       });
            };
            double total = 0.0;
            for (bool top : {false, true}) {
                total += gk(
                    [&](double r) {
                        return gk([&](double d) { return ring(r, eta + d, 0.0, -1.0, d, top); }, 0.25 * eta, 0.5 * eta,
                                  tin, "global_budget_limit", 1e-12);
                    },
                    0.0, rc, tol, "global_budget_limit", 1e-11);
                total += gk(
                    [&](double zr) {
                        return gk([&](double d) { return ring(re - d, zr, 1.0, 0.0, d, top); }, 0.25 * eta, 0.5 * eta,
                                  tin, "global_budget_limit", 1e-12);
                    },
                    zc, 0.5, tol, "global_budget_limit", 1e-11);
                // Corner: C(th) = (rc + k sqrt(cos), zc - k sqrt(sin)), k = eta (cos^1.5 + sin^1.5)^{-1/3};
                // th is the normal angle, so |C'(th)| is the curvature radius and the area element
                // is (|C'| - d) dd dth. th = (pi/2)(3v^2 - 2v^3) tames the endpoint growth of |C'|.
                total += gk(
                    [&](double v) {
                        const double th = 0.5 * kPi * v * v * (3.0 - 2.0 * v);
                        const double dth = 0.5 * kPi * 6.0 * v * (1.0 - v);
                        const double c = std::cos(th), s = std::sin(th);
                        if (c <= 0.0 || s <= 0.0) return 0.0;
                        const double g = std::pow(c, 1.5) + std::pow(s, 1.5);
                        const double k = eta / std::cbrt(g);
                        const double dg = 1.5 * (std::sqrt(s) * c - std::sqrt(c) * s);
                        const double dk = -k * dg / (3.0 * g);
                        const double cr = dk * std::sqrt(c) - k * s / (2.0 * std::sqrt(c));
                        const double cz = -dk * std::sqrt(s) - k * c / (2.0 * std::sqrt(s));
                        const double speed = std::hypot(cr, cz);
                        const double pr = rc + k * std::sqrt(c), pz = zc - k * std::sqrt(s);
                        return dth * gk(
                                         [&](double d) {
                                             return (speed - d) * ring(pr - d * c, pz + d * s, c, -s, d, top);
                                         },
                                         0.25 * eta, 0.5 * eta, tin, "global_budget_limit", 1e-12);
                    },
                    0.0, 1.0, tol, "global_budget_limit", 1e-11);
            }
            return total;
        };
        double v = 0.0;
        for (std::size_t q = 0; q < tn.size(); ++q) v += tw[q] * term(tn[q]);
        out.eta.push_back(eta);
        out.value.push_back(-v);
    }
    std::vector<double> mag;
    for (double v : out.value) mag.push_back(std::abs(v));
    out.fit = fit_loglog(out.eta, mag);
    return out;
}

} // namespace pelab
