#include "pelab/visc_solver.hpp"

#include "pelab/error.hpp"
#include "pelab/mollify.hpp"
#include "pelab/quadrature.hpp"
#include "pelab/spectral.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <algorithm>
#include <numbers>
#include <random>
#include <sstream>

namespace pelab {

namespace {

constexpr double kPi = std::numbers::pi;

Grid3 slice_grid(const ViscRunConfig& c) { return Grid3::channel(c.nx, 1, c.nz, c.period); }

// Trapezoid weight of level k on the slice.
double zw(int k, int nz, double hz) { return (k == 0 || k == nz) ? 0.5 * hz : hz; }

// Per-step spectral workspace for the slice.
struct Slice {
    const Grid3& g;
    HorizontalFFT fft;
    explicit Slice(const Grid3& grid) : g(grid), fft(grid.nx(), 1, grid.nzp(), grid.period()) {}

    SField dx(const SField& f) {
        SField out(g);
        fft.apply(f.data(), out.data(), [&](int i, int) -> cplx {
            if (fft.is_nyquist(i, 0)) return 0.0;
            return cplx(0.0, fft.kx(i));
        });
        return out;
    }
};

// Summation-by-parts first derivative in z: centered inside, one-sided at the ends; with the
// trapezoid norm H it satisfies H D + (H D)^T = diag(-1, 0, ..., 0, 1).
SField dz_sbp(const SField& f) {
    const Grid3& g = f.grid();
    SField out(g);
    const int nz = g.nz(), nzp = g.nzp();
    const double h = g.hz();
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const double* v = f.data() + c * nzp;
        double* o = out.data() + c * nzp;
        o[0] = (v[1] - v[0]) / h;
        for (int k = 1; k < nz; ++k) o[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
        o[nz] = (v[nz] - v[nz - 1]) / h;
    }
    return out;
}

// w = -int_0^z d_x u by cumulative trapezoid.
SField diagnose_w(const SField& ux) {
    const Grid3& g = ux.grid();
    SField w(g);
    const int nzp = g.nzp();
    const double hz = g.hz();
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const double* d = ux.data() + c * nzp;
        double* o = w.data() + c * nzp;
        double s = 0.0;
        o[0] = 0.0;
        for (int k = 1; k < nzp; ++k) {
            s += 0.5 * hz * (d[k - 1] + d[k]);
            o[k] = -s;
        }
    }
    return w;
}

std::vector<double> column_means(const SField& u) {
    const Grid3& g = u.grid();
    const int nzp = g.nzp(), nz = g.nz();
    std::vector<double> m(g.ncols());
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        double s = 0.0;
        for (int k = 0; k < nzp; ++k) s += zw(k, nz, g.hz()) * u[c * nzp + k];
        m[c] = s;
    }
    return m;
}

// Orthogonal (trapezoid-norm) projection onto fields with x-independent column mean and u = 0
// at z = 0: the correction is z-uniform on the levels k >= 1.
void project(SField& u) {
    const Grid3& g = u.grid();
    const int nzp = g.nzp();
    for (std::size_t c = 0; c < g.ncols(); ++c) u[c * nzp] = 0.0;
    auto m = column_means(u);
    const double mean = pairwise_sum(m) / static_cast<double>(m.size());
    const double mass = 1.0 - 0.5 * g.hz();
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const double corr = (m[c] - mean) / mass;
        for (int k = 1; k < nzp; ++k) u[c * nzp + k] -= corr;
    }
}

// -(skew-symmetric advection): -(1/2)[d_x(uu) + d_z(uw)] - (1/2)[u d_x u + w d_z u], zero at z = 0.
SField advection_rhs(Slice& sl, const SField& u) {
    const SField ux = sl.dx(u);
    const SField w = diagnose_w(ux);
    const SField duu = sl.dx(u * u);
    const SField duw = dz_sbp(u * w);
    const SField uz = dz_sbp(u);
    SField r(u.grid());
    for (std::size_t n = 0; n < u.size(); ++n) r[n] = -0.5 * (duu[n] + duw[n]) - 0.5 * (u[n] * ux[n] + w[n] * uz[n]);
    const int nzp = u.grid().nzp();
    for (std::size_t c = 0; c < u.grid().ncols(); ++c) r[c * nzp] = 0.0;
    return r;
}

// Thomas algorithm, real tridiagonal (a sub, b diag, c super), complex right-hand side.
void thomas(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& c,
            std::vector<cplx>& d) {
    const std::size_t n = b.size();
    std::vector<double> cp(n);
    cp[0] = c[0] / b[0];
    d[0] /= b[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        d[i] = (d[i] - a[i] * d[i - 1]) / m;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp[i] * d[i + 1];
}

double max_abs_w(const SField& w) { return w.max_abs(); }

void check_finite(const SField& u, long stepIndex) {
    if (!u.all_finite()) {
        std::ostringstream os;
        os << "visc_solver: non-finite value at step " << stepIndex;
        throw NumericalGuard(os.str());
    }
}

} // namespace

void validate(const ViscRunConfig& c) {
    if (c.nx < 4 || c.nz < 4) throw ConfigError("ViscRunConfig: nx and nz must be at least 4");
    if (!(c.nu >= 0.0)) throw ConfigError("ViscRunConfig: nu must be >= 0");
    if (!(c.tEnd > 0.0)) throw ConfigError("ViscRunConfig: tEnd must be > 0");
    if (!(c.period > 0.0)) throw ConfigError("ViscRunConfig: period must be > 0");
    if (c.dt < 0.0) throw ConfigError("ViscRunConfig: dt must be >= 0");
    if (c.initialField != "smooth" && c.initialField != "eigenmode" && c.initialField != "zero")
        throw ConfigError("ViscRunConfig: unknown initial field '" + c.initialField + "'");
}

ViscState initial_state(const ViscRunConfig& c) {
    validate(c);
    const Grid3 g = slice_grid(c);
    ViscState s;
    s.u = SField(g);
    const double q = 2.0 * kPi / c.period;
    if (c.initialField == "eigenmode") {
        for (int i = 0; i < c.nx; ++i)
            for (int k = 0; k <= c.nz; ++k) s.u(i, 0, k) = c.amplitude * std::sin(0.5 * kPi * g.z(k));
    } else if (c.initialField == "smooth") {
        // Mean flow plus three x-modes with profile g(z) = sin(3 pi z/2) - sin(pi z/2)/3, which meets
        // both boundary conditions and has zero vertical mean.
        std::mt19937_64 rng(c.seed);
        double ph[3], am[3];
        for (int m = 0; m < 3; ++m) {
            ph[m] = 2.0 * kPi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
            am[m] = 1.0 / (m + 1);
        }
        for (int i = 0; i < c.nx; ++i)
            for (int k = 0; k <= c.nz; ++k) {
                const double z = g.z(k);
                const double prof = std::sin(1.5 * kPi * z) - std::sin(0.5 * kPi * z) / 3.0;
                double v = std::sin(0.5 * kPi * z);
                for (int m = 0; m < 3; ++m) v += am[m] * std::cos((m + 1) * q * i * g.hx() + ph[m]) * prof;
                s.u(i, 0, k) = c.amplitude * v;
            }
        project(s.u);
    }
    Slice sl(g);
    s.w = diagnose_w(sl.dx(s.u));
    return s;
}

double slice_energy(const SField& u) {
    const Grid3& g = u.grid();
    return 0.5 * integrate_fn(g, [&](std::size_t c, int k) {
               const double v = u[c * g.nzp() + k];
               return v * v;
           }) /
           g.hy();
}

double barotropic_defect(const SField& u) {
    const Grid3& g = u.grid();
    const auto m = column_means(u);
    HorizontalFFT fft(g.nx(), 1, 1, g.period());
    std::vector<double> d(m.size());
    fft.apply(m.data(), d.data(), [&](int i, int) -> cplx {
        if (fft.is_nyquist(i, 0)) return 0.0;
        return cplx(0.0, fft.kx(i));
    });
    double r = 0.0;
    for (double v : d) r = std::max(r, std::abs(v));
    return r;
}

double stable_dt(const ViscRunConfig& c, const ViscState& s) {
    const Grid3& g = s.u.grid();
    double dt = kInf;
    if (c.nu > 0.0) dt = std::min(dt, 0.25 * std::min(g.hx() * g.hx(), g.hz() * g.hz()) / c.nu);
    if (c.advection) {
        const double umax = s.u.max_abs(), wmax = max_abs_w(s.w);
        if (umax > 0.0) dt = std::min(dt, 0.5 * g.hx() / umax);
        if (wmax > 0.0) dt = std::min(dt, 0.5 * g.hz() / wmax);
    }
    return dt;
}

ViscState step(const ViscState& s, const ViscRunConfig& c) {
    const Grid3& g = s.u.grid();
    require(g == slice_grid(c), "step: state does not match the configuration grid");
    const double dt = c.dt;
    require(dt > 0.0, "step: dt must be positive");
    if (dt > stable_dt(c, s) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "visc_solver: stability limit violated at step " << s.step << ": dt = " << dt << " > " << stable_dt(c, s);
        throw NumericalGuard(os.str());
    }
    Slice sl(g);
    SField u = s.u;

    if (c.advection) {
        // SSP-RK3 (Shu-Osher), each stage projected.
        SField u1 = u + dt * advection_rhs(sl, u);
        project(u1);
        SField u2 = 0.75 * u + 0.25 * (u1 + dt * advection_rhs(sl, u1));
        project(u2);
        u = (1.0 / 3.0) * u + (2.0 / 3.0) * (u2 + dt * advection_rhs(sl, u2));
        project(u);
    }

    double dissip = 0.0;
    if (c.nu > 0.0) {
        const int nx = g.nx(), nz = g.nz(), nzp = g.nzp();
        const double hz = g.hz(), h2 = hz * hz, a = 0.5 * dt * c.nu;
        const double q = 2.0 * kPi / c.period;
        sl.fft.forward(u.data());
        cplx* S = sl.fft.spectrum();
        std::vector<double> dis(nx, 0.0);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nx; ++i) {
            const int m = std::min(i, nx - i);
            const double k2 = (q * m) * (q * m);
            cplx* v = S + sl.fft.spec_index(i, 0, 0);
            // Unknowns at levels 1..nz; L = second difference with u_0 = 0 and a mirror ghost at the lid.
            std::vector<double> lo(nz), di(nz), up(nz);
            std::vector<cplx> rhs(nz), h(nz);
            for (int r = 0; r < nz; ++r) {
                const int k = r + 1;
                const double off_lo = (k == nz) ? 2.0 / h2 : 1.0 / h2;
                const double off_up = (k == nz) ? 0.0 : 1.0 / h2;
                const double dg = -2.0 / h2 - k2;
                lo[r] = (r == 0) ? 0.0 : -a * off_lo;
                up[r] = -a * off_up;
                di[r] = 1.0 - a * dg;
                const cplx lu = dg * v[k] + off_lo * v[k - 1] + (k < nz ? off_up * v[k + 1] : cplx(0.0));
                rhs[r] = v[k] + a * lu;
                h[r] = 1.0;
            }
            std::vector<cplx> old(v + 1, v + nzp);
            thomas(lo, di, up, rhs);
            if (m != 0) {
                thomas(lo, di, up, h);
                cplx sg = 0.0, sh = 0.0;
                for (int r = 0; r < nz; ++r) {
                    const double wk = zw(r + 1, nz, hz);
                    sg += wk * rhs[r];
                    sh += wk * h[r];
                }
                const cplx lam = sg / sh;
                for (int r = 0; r < nz; ++r) rhs[r] -= lam * h[r];
            }
            // Dissipation at the midpoint state, in the same discrete norm as L.
            double dsum = 0.0;
            cplx prev = 0.0;
            for (int r = 0; r < nz; ++r) {
                const cplx mid = 0.5 * (rhs[r] + old[r]);
                dsum += zw(r + 1, nz, hz) * k2 * std::norm(mid) + std::norm(mid - prev) / hz;
                prev = mid;
                v[r + 1] = rhs[r];
            }
            v[0] = 0.0;
            dis[i] = dsum;
        }
        sl.fft.inverse(u.data());
        // Parseval: int dx |f|^2 = (period / nx^2) sum_i |F_i|^2.
        dissip = c.nu * c.period / (static_cast<double>(nx) * nx) * pairwise_sum(dis);
    }

    ViscState out;
    out.t = s.t + dt;
    out.step = s.step + 1;
    check_finite(u, out.step);
    out.u = std::move(u);
    out.w = diagnose_w(sl.dx(out.u));
    out.dissipationRate = dissip;
    return out;
}

void DissipationLedger::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << "t,E,dissipRate,cumDissip,defect\n" << std::setprecision(17);
    for (std::size_t n = 0; n < t.size(); ++n)
        os << t[n] << ',' << energy[n] << ',' << dissipRate[n] << ',' << cumDissip[n] << ',' << defect[n] << '\n';
    if (!os) throw Error("write failed: " + path);
}

ViscRun run(const ViscRunConfig& cfg) {
    ViscRunConfig c = cfg;
    ViscState s = initial_state(c);
    const double limit = stable_dt(c, s);
    if (c.dt == 0.0) {
        require(std::isfinite(limit), "run: dt = 0 needs a finite stability limit (nu > 0 or nonzero flow)");
        c.dt = 0.5 * limit;
    } else if (c.dt > limit) {
        std::ostringstream os;
        os << "ViscRunConfig: dt = " << c.dt << " exceeds the stability limit " << limit;
        throw ConfigError(os.str());
    }
    const long nsteps = static_cast<long>(std::ceil(c.tEnd / c.dt - 1e-9));
    c.dt = c.tEnd / static_cast<double>(nsteps);

    ViscRun r;
    r.dt = c.dt;
    const double E0 = slice_energy(s.u);
    double cum = 0.0;
    const auto record = [&](const ViscState& st, double E) {
        r.ledger.t.push_back(st.t);
        r.ledger.energy.push_back(E);
        r.ledger.dissipRate.push_back(st.dissipationRate);
        r.ledger.cumDissip.push_back(cum);
        r.ledger.defect.push_back(E0 - E - cum);
    };
    record(s, E0);
    if (c.snapshotEvery > 0) r.snapshots.push_back(s);
    double Eprev = E0;
    for (long n = 0; n < nsteps; ++n) {
        s = step(s, c);
        const double E = slice_energy(s.u);
        cum += c.dt * s.dissipationRate;
        if (E + c.dt * s.dissipationRate > Eprev + 1e-6 * E0) {
            std::ostringstream os;
            os << "visc_solver: energy inequality violated at step " << s.step << ": E = " << E << ", previous "
               << Eprev << ", dissipation " << c.dt * s.dissipationRate;
            throw NumericalGuard(os.str());
        }
        Eprev = E;
        record(s, E);
        if (c.snapshotEvery > 0 && s.step % c.snapshotEvery == 0) r.snapshots.push_back(s);
    }
    r.final = std::move(s);
    return r;
}

ViscositySweep viscosity_sweep(const ViscRunConfig& base, const std::vector<double>& nus) {
    require(nus.size() >= 4, "viscosity_sweep: need at least 4 viscosities");
    for (std::size_t i = 1; i < nus.size(); ++i) require(nus[i] < nus[i - 1], "viscosity_sweep: nu list must decrease");
    const double hz = 1.0 / base.nz;
    for (double nu : nus) {
        if (std::sqrt(nu * base.tEnd) < 4.0 * hz) {
            std::ostringstream os;
            os << "viscosity_sweep: boundary layer unresolved for nu = " << nu << ": sqrt(nu T) = "
               << std::sqrt(nu * base.tEnd) << " < 4 hz = " << 4.0 * hz;
            throw PreconditionError(os.str());
        }
    }
    ViscositySweep sw;
    std::vector<double> d;
    for (double nu : nus) {
        ViscRunConfig c = base;
        c.nu = nu;
        c.snapshotEvery = 0;
        const ViscRun r = run(c);
        SweepRow row;
        row.nu = nu;
        row.totalDissipation = r.ledger.cumDissip.back();
        row.finalEnergy = r.ledger.energy.back();
        row.initialEnergy = r.ledger.energy.front();
        for (double v : r.ledger.defect) row.maxDefect = std::max(row.maxDefect, std::abs(v));
        sw.rows.push_back(row);
        d.push_back(row.totalDissipation);
    }
    sw.monotone = true;
    for (std::size_t i = 1; i < d.size(); ++i) sw.monotone = sw.monotone && d[i] < d[i - 1];
    sw.fit = fit_loglog(nus, d);
    return sw;
}

RegularitySeries regularity_monitor(const std::vector<ViscState>& states, double alpha, double beta,
                                    const HolderOptions& o) {
    RegularitySeries rs;
    for (const auto& s : states) {
        rs.t.push_back(s.t);
        rs.seminorm.push_back(seminorm_aniso(s.u, alpha, beta, o));
    }
    for (std::size_t n = 1; n < rs.t.size(); ++n) {
        const double a = rs.seminorm[n - 1], b = rs.seminorm[n];
        rs.aggregate += 0.5 * (rs.t[n] - rs.t[n - 1]) * (a * a * a + b * b * b);
    }
    return rs;
}

} // namespace pelab
