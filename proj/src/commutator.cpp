#include "pelab/commutator.hpp"

#include "pelab/error.hpp"
#include "pelab/hydrostatics.hpp"
#include "pelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pelab {

Exponents exponent_formulas(double a, double b) {
    Exponents e;
    e.e1 = std::min(3 * a - 1, a + 2 * b - 1);
    e.e2 = 2 * std::min(a, b) + std::max(a, b) - 2;
    e.eW = a - 1;
    return e;
}

Exponents predicted_exponents(double a, double b, Regime r) {
    if (r == Regime::Inadmissible) {
        std::ostringstream os;
        os << "predicted_exponents: (" << a << ", " << b << ") is inadmissible";
        throw PreconditionError(os.str());
    }
    if (r == Regime::InteriorRange) return exponent_formulas(a, b);
    // C^{1,a-1} horizontal profile: the increment bounds use the Lipschitz exponent.
    const double ae = std::min(a, 1.0);
    Exponents e;
    e.e1 = std::min(3 * ae - 1, ae + 2 * b - 1);
    e.e2 = a + 2 * b - 2;
    e.eW = a - 1;
    return e;
}

Exponents predicted_exponents(double a, double b) { return predicted_exponents(a, b, admissible(a, b)); }

SField horizontal_derivative(const SField& f, HAxis axis, DerivScheme s) {
    if (s == DerivScheme::Spectral) return spectral_derivative(f, axis);
    const Grid3& g = f.grid();
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError("horizontal_derivative: PeriodicChannel grid required");
    SField out(g);
    const int nx = g.nx(), ny = g.ny(), nzp = g.nzp();
    const double inv = 1.0 / (2.0 * (axis == HAxis::X ? g.hx() : g.hy()));
#pragma omp parallel for schedule(static) collapse(2)
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            int ip, im, jp, jm;
            if (axis == HAxis::X) {
                ip = (i + 1) % nx, im = (i + nx - 1) % nx, jp = jm = j;
            } else {
                jp = (j + 1) % ny, jm = (j + ny - 1) % ny, ip = im = i;
            }
            const double* a = f.data() + g.index(ip, jp, 0);
            const double* b = f.data() + g.index(im, jm, 0);
            double* o = out.data() + g.index(i, j, 0);
            for (int k = 0; k < nzp; ++k) o[k] = (a[k] - b[k]) * inv;
        }
    return out;
}

SField vertical_derivative(const SField& f) {
    const Grid3& g = f.grid();
    SField out(g);
    const int nzp = g.nzp(), n = g.nz();
    const double h = g.hz();
    require(n >= 2, "vertical_derivative: need nz >= 2");
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const double* v = f.data() + c * nzp;
        double* o = out.data() + c * nzp;
        o[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
        for (int k = 1; k < n; ++k) o[k] = (v[k + 1] - v[k - 1]) / (2 * h);
        o[n] = (3 * v[n] - 4 * v[n - 1] + v[n - 2]) / (2 * h);
    }
    return out;
}

SField vertical_derivative4(const SField& f) {
    const Grid3& g = f.grid();
    SField out(g);
    const int nzp = g.nzp(), n = g.nz();
    const double h12 = 12.0 * g.hz();
    require(n >= 4, "vertical_derivative4: need nz >= 4");
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const double* v = f.data() + c * nzp;
        double* o = out.data() + c * nzp;
        o[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / h12;
        o[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / h12;
        for (int k = 2; k <= n - 2; ++k) o[k] = (-v[k + 2] + 8 * v[k + 1] - 8 * v[k - 1] + v[k - 2]) / h12;
        o[n - 1] = (3 * v[n] + 10 * v[n - 1] - 18 * v[n - 2] + 6 * v[n - 3] - v[n - 4]) / h12;
        o[n] = (25 * v[n] - 48 * v[n - 1] + 36 * v[n - 2] - 16 * v[n - 3] + 3 * v[n - 4]) / h12;
    }
    return out;
}

CommutatorSetup CommutatorSetup::standard(const Grid3& g, Ramp ramp) {
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError("CommutatorSetup: PeriodicChannel grid required");
    const double L = g.period();
    CommutatorSetup s;
    s.ext.q3.lo[2] = 0.25;
    s.ext.q3.hi[2] = 0.75;
    s.ext.q2.lo[2] = 0.125;
    s.ext.q2.hi[2] = 0.875;
    s.ext.q1.lo[2] = 0.0625;
    s.ext.q1.hi[2] = 0.9375;
    s.ext.eta = 0.05;
    Box plateau, support;
    plateau.lo = {0.25 * L, 0.25 * L, 0.3125};
    plateau.hi = {0.75 * L, 0.75 * L, 0.6875};
    support.lo = {0.125 * L, 0.125 * L, 0.25};
    support.hi = {0.875 * L, 0.875 * L, 0.75};
    s.psi = make_box_weight(g, plateau, support, ramp);
    return s;
}

double CommutatorSetup::max_eps() const {
    // psi lives in z in [q3.lo, q3.hi]; margin 2 eps to the walls and eps to the I2 ramp.
    const double wall = std::min(ext.q3.lo[2], 1.0 - ext.q3.hi[2]) / 2.0;
    const double ramp = std::min(ext.q3.lo[2] - ext.q2.lo[2], ext.q2.hi[2] - ext.q3.hi[2]);
    return std::min(wall, ramp);
}

namespace {

// Vertical extent of the nonzero part of psi, checked against a 2 eps wall margin.
void check_margin(const SField& psi, double eps, const char* what) {
    const Grid3& g = psi.grid();
    const int nzp = g.nzp();
    int kmin = nzp, kmax = -1;
    for (std::size_t c = 0; c < g.ncols(); ++c)
        for (int k = 0; k < nzp; ++k)
            if (psi[c * nzp + k] != 0.0) {
                kmin = std::min(kmin, k);
                kmax = std::max(kmax, k);
            }
    if (kmax < 0) return;
    const double margin = std::min(g.z(kmin), 1.0 - g.z(kmax));
    if (margin < 2.0 * eps - 1e-12) {
        std::ostringstream os;
        os << what << ": support margin violated, psi reaches " << margin << " from the wall, need 2*eps = " << 2 * eps;
        throw PreconditionError(os.str());
    }
}

double mul_integral(const SField& a, const SField& b) { return integrate_product(a, b); }

} // namespace

CetTerms cet_decompose(const SField& u, const SField& w, const Mollifier& m) {
    require_same_grid(u.grid(), w.grid(), "cet_decompose");
    const Grid3& g = u.grid();
    MollifyOperator op(g, m, Backend::Parallel);
    const SField ue = op(u), we = op(w), uwe = op(u * w);
    CetTerms t;
    t.A = SField(g);
    t.B = SField(g);
    t.C = SField(g);
    for (std::size_t n = 0; n < g.size(); ++n) {
        t.A[n] = ue[n] * we[n] - uwe[n];
        t.B[n] = (u[n] - ue[n]) * (w[n] - we[n]);
    }
    // C by explicit summation over the kernel taps (zero extension beyond the vertical range).
    const auto& taps = op.stencil().taps;
    const int nx = g.nx(), ny = g.ny(), nz = g.nz();
#pragma omp parallel for schedule(static) collapse(2)
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k <= nz; ++k) {
                const double u0 = u(i, j, k), w0 = w(i, j, k);
                double s = 0.0;
                for (const auto& tp : taps) {
                    const int kk = k - tp.dk;
                    const int ii = ((i - tp.di) % nx + nx) % nx;
                    const int jj = ((j - tp.dj) % ny + ny) % ny;
                    const double us = (kk < 0 || kk > nz) ? 0.0 : u(ii, jj, kk);
                    const double ws = (kk < 0 || kk > nz) ? 0.0 : w(ii, jj, kk);
                    s += tp.w * (us - u0) * (ws - w0);
                }
                t.C(i, j, k) = s;
            }
    for (std::size_t n = 0; n < g.size(); ++n) {
        t.defect = std::max(t.defect, std::abs(t.A[n] - t.B[n] + t.C[n]));
        t.maxA = std::max(t.maxA, std::abs(t.A[n]));
    }
    return t;
}

namespace {

struct EpsPass {
    double T1 = 0.0, T2 = 0.0, uDef = 0.0, wDef = 0.0, dzSup = 0.0;
};

EpsPass eps_pass(const HField& u, const SField* w, double eps, const SField& psi, double chi, DerivScheme scheme,
                 bool want_T1, bool want_T2) {
    const Grid3& g = u.grid();
    MollifyOperator op(g, Mollifier{eps});
    EpsPass r;
    const SField a1 = op(u[0]), a2 = op(u[1]);
    const SField pa1 = psi * a1, pa2 = psi * a2;

    if (want_T1) {
        // R_ij = (u_i u_j)^e - a_i a_j against d_j(psi a_i); R is symmetric.
        double t = 0.0;
        {
            const SField R = op(u[0] * u[0]) - a1 * a1;
            t += mul_integral(R, horizontal_derivative(pa1, HAxis::X, scheme));
        }
        {
            const SField R = op(u[0] * u[1]) - a1 * a2;
            t += mul_integral(R, horizontal_derivative(pa1, HAxis::Y, scheme) + horizontal_derivative(pa2, HAxis::X, scheme));
        }
        {
            const SField R = op(u[1] * u[1]) - a2 * a2;
            t += mul_integral(R, horizontal_derivative(pa2, HAxis::Y, scheme));
        }
        r.T1 = std::abs(chi * t);
    }

    const SField d1 = vertical_derivative(pa1), d2 = vertical_derivative(pa2);
    for (std::size_t n = 0; n < g.size(); ++n) r.dzSup = std::max(r.dzSup, std::hypot(d1[n], d2[n]));
    for (std::size_t n = 0; n < g.size(); ++n)
        if (psi[n] > 0.0) r.uDef = std::max(r.uDef, std::hypot(u[0][n] - a1[n], u[1][n] - a2[n]));

    if (w) {
        const SField b = op(*w);
        for (std::size_t n = 0; n < g.size(); ++n)
            if (psi[n] > 0.0) r.wDef = std::max(r.wDef, std::abs((*w)[n] - b[n]));
        if (want_T2) {
            double t = 0.0;
            t += mul_integral(op(u[0] * (*w)) - a1 * b, d1);
            t += mul_integral(op(u[1] * (*w)) - a2 * b, d2);
            r.T2 = std::abs(chi * t);
        }
    }
    return r;
}

} // namespace

double horizontal_functional(const HField& u, const Mollifier& m, double chi, const SField& psi, DerivScheme s) {
    require_same_grid(u.grid(), psi.grid(), "horizontal_functional");
    check_margin(psi, m.eps, "horizontal_functional");
    return eps_pass(u, nullptr, m.eps, psi, chi, s, true, false).T1;
}

double vertical_functional(const HField& u, const SField& w, const Mollifier& m, double chi, const SField& psi) {
    require_same_grid(u.grid(), psi.grid(), "vertical_functional");
    require_same_grid(u.grid(), w.grid(), "vertical_functional");
    check_margin(psi, m.eps, "vertical_functional");
    return eps_pass(u, &w, m.eps, psi, chi, DerivScheme::Centered, false, true).T2;
}

std::vector<CommutatorRow> commutator_rows(const HField& u_bar, const SField& w_bar, const std::vector<double>& eps,
                                           const CommutatorSetup& setup) {
    std::vector<CommutatorRow> rows;
    for (double e : eps) {
        check_margin(setup.psi, e, "commutator sweep");
        const EpsPass p = eps_pass(u_bar, &w_bar, e, setup.psi, setup.chi, DerivScheme::Centered, true, true);
        rows.push_back({e, p.T1, p.T2, p.wDef, p.uDef, p.dzSup});
    }
    return rows;
}

CommutatorReport commutator_sweep(const HField& u, double alpha, double beta, const std::vector<double>& eps,
                                  const CommutatorSetup& setup) {
    CommutatorReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.regime = admissible(alpha, beta);
    rep.predicted = predicted_exponents(alpha, beta, rep.regime);
    const SField w = reconstruct_w(u);
    const HField ub = extend(u, setup.ext);
    const SField wb = extend(w, setup.ext);
    rep.rows = commutator_rows(ub, wb, eps, setup);
    std::vector<double> e, t1, t2, wd, dz;
    for (const auto& r : rep.rows) {
        e.push_back(r.eps);
        t1.push_back(r.T1);
        t2.push_back(r.T2);
        wd.push_back(r.wDeficit);
        dz.push_back(r.dzPsiU_sup);
    }
    rep.fitT1 = fit_dyadic_sweep(e, t1);
    rep.fitT2 = fit_dyadic_sweep(e, t2);
    rep.fitW = fit_dyadic_sweep(e, wd);
    rep.fitDz = fit_dyadic_sweep(e, dz);
    return rep;
}

ScalingFit w_deficit(const HField& u, const std::vector<double>& eps, const CommutatorSetup& setup) {
    const SField w = reconstruct_w(u);
    const SField wb = extend(w, setup.ext);
    std::vector<double> vals;
    for (double e : eps) {
        check_margin(setup.psi, e, "w_deficit");
        const SField b = mollify(wb, Mollifier{e});
        double m = 0.0;
        for (std::size_t n = 0; n < wb.size(); ++n)
            if (setup.psi[n] > 0.0) m = std::max(m, std::abs(wb[n] - b[n]));
        vals.push_back(m);
    }
    return fit_dyadic_sweep(eps, vals);
}

} // namespace pelab
