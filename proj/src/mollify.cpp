#include "pelab/mollify.hpp"

#include "pelab/error.hpp"
#include "pelab/quadrature.hpp"
#include "pelab/reference.hpp"

#include <cmath>
#include <map>
#include <string>

namespace pelab {

double bump_profile(double r) {
    if (std::abs(r) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r * r));
}

double KernelStencil::mass() const {
    std::vector<double> w;
    w.reserve(taps.size());
    for (const auto& t : taps) w.push_back(t.w);
    return pairwise_sum(w);
}

KernelStencil build_stencil(const Grid3& g, double eps) {
    if (!(eps >= 2.0 * g.max_spacing() * (1.0 - 1e-12)))
        throw PreconditionError("mollify: under-resolved kernel (eps=" + std::to_string(eps) +
                                " < 2*max spacing=" + std::to_string(2.0 * g.max_spacing()) + ")");
    if (g.mode() == Mode::PeriodicChannel && !(eps < 0.5 * g.period()))
        throw PreconditionError("mollify: kernel wider than half the torus");
    KernelStencil st;
    st.ri = static_cast<int>(std::floor(eps / g.hx()));
    st.rj = static_cast<int>(std::floor(eps / g.hy()));
    st.rk = static_cast<int>(std::floor(eps / g.hz()));
    for (int di = -st.ri; di <= st.ri; ++di)
        for (int dj = -st.rj; dj <= st.rj; ++dj)
            for (int dk = -st.rk; dk <= st.rk; ++dk) {
                const double X = di * g.hx(), Y = dj * g.hy(), Z = dk * g.hz();
                const double r = std::sqrt(X * X + Y * Y + Z * Z) / eps;
                const double w = bump_profile(r);
                if (w > 0.0) st.taps.push_back({di, dj, dk, w});
            }
    const double m = st.mass();
    for (auto& t : st.taps) t.w /= m;
    return st;
}

namespace {

struct ColumnGroup {
    int di, dj;
    std::vector<std::pair<int, double>> zs;
};

std::vector<ColumnGroup> group_taps(const KernelStencil& st) {
    std::map<std::pair<int, int>, ColumnGroup> m;
    for (const auto& t : st.taps) {
        auto& gr = m[{t.di, t.dj}];
        gr.di = t.di;
        gr.dj = t.dj;
        gr.zs.emplace_back(t.dk, t.w);
    }
    std::vector<ColumnGroup> out;
    for (auto& [k, v] : m) out.push_back(std::move(v));
    return out;
}

// Column-blocked direct sum. Every output column performs the same operation sequence,
// so the result does not depend on how columns are distributed over threads.
void mollify_direct_parallel(const Grid3& g, const KernelStencil& st, const double* in, double* out) {
    const auto groups = group_taps(st);
    const int nx = g.nx(), ny = g.ny(), nzp = g.nzp();
#pragma omp parallel for schedule(static) collapse(2)
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            double* dst = out + g.index(i, j, 0);
            for (int k = 0; k < nzp; ++k) dst[k] = 0.0;
            for (const auto& gr : groups) {
                const int si = ((i - gr.di) % nx + nx) % nx;
                const int sj = ((j - gr.dj) % ny + ny) % ny;
                const double* src = in + g.index(si, sj, 0);
                for (const auto& [dk, w] : gr.zs) {
                    const int k0 = std::max(0, dk), k1 = std::min(nzp, nzp + dk);
                    for (int k = k0; k < k1; ++k) dst[k] += w * src[k - dk];
                }
            }
        }
}

Backend resolve(Backend b, const KernelStencil& st) {
    if (b != Backend::Auto) return b;
    return st.taps.size() <= 150 ? Backend::Parallel : Backend::FFT;
}

} // namespace

MollifyOperator::MollifyOperator(const Grid3& g, const Mollifier& m, Backend b) : g_(g) {
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError("mollify: PeriodicChannel grid required");
    st_ = build_stencil(g, m.eps);
    b_ = resolve(b, st_);
    if (b_ == Backend::FFT) fft_ = new FftConvolver(g.nx(), g.ny(), g.nzp(), st_.taps);
}

MollifyOperator::~MollifyOperator() { delete fft_; }

SField MollifyOperator::operator()(const SField& f) const {
    require_same_grid(g_, f.grid(), "mollify");
    switch (b_) {
    case Backend::Serial:
        return reference::mollify_direct(f, st_);
    case Backend::FFT: {
        SField out(g_);
        fft_->apply(f.data(), out.data());
        return out;
    }
    default: {
        SField out(g_);
        mollify_direct_parallel(g_, st_, f.data(), out.data());
        return out;
    }
    }
}

SField mollify(const SField& f, const Mollifier& m, Backend b) { return MollifyOperator(f.grid(), m, b)(f); }

HField mollify(const HField& u, const Mollifier& m, Backend b) {
    MollifyOperator op(u.grid(), m, b);
    return HField(op(u[0]), op(u[1]));
}

std::vector<SField> mollify_time(const std::vector<SField>& snaps, double dt, double kappa) {
    require(dt > 0 && kappa > 0, "mollify_time: dt and kappa must be positive");
    const int r = static_cast<int>(std::floor(kappa / dt));
    require(r >= 1, "mollify_time: kappa must cover at least one snapshot spacing");
    std::vector<double> w(2 * r + 1);
    for (int m = -r; m <= r; ++m) w[m + r] = bump_profile(m * dt / kappa);
    const double s = pairwise_sum(w);
    for (auto& x : w) x /= s;
    std::vector<SField> out;
    const int n = static_cast<int>(snaps.size());
    for (int t = r; t < n - r; ++t) {
        SField o(snaps[t].grid());
        for (int m = -r; m <= r; ++m) {
            require_same_grid(o.grid(), snaps[t - m].grid(), "mollify_time");
            const double wm = w[m + r];
            for (std::size_t q = 0; q < o.size(); ++q) o[q] += wm * snaps[t - m][q];
        }
        out.push_back(std::move(o));
    }
    return out;
}

bool Box::contains(double x, double y, double z) const {
    const double p[3] = {x, y, z};
    for (int a = 0; a < 3; ++a)
        if (p[a] < lo[a] || p[a] > hi[a]) return false;
    return true;
}

Box Box::inflate(double d) const {
    Box b = *this;
    for (int a = 0; a < 3; ++a) {
        b.lo[a] -= d;
        b.hi[a] += d;
    }
    return b;
}

double quintic_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double box_weight(const Box& pl, const Box& sp, double x, double y, double z, Ramp r) {
    const double p[3] = {x, y, z};
    double w = 1.0;
    for (int a = 0; a < 3; ++a) {
        const double v = p[a];
        if (v <= sp.lo[a] || v >= sp.hi[a]) return 0.0;
        double t = 1.0;
        if (v < pl.lo[a]) t = (v - sp.lo[a]) / (pl.lo[a] - sp.lo[a]);
        else if (v > pl.hi[a]) t = (sp.hi[a] - v) / (sp.hi[a] - pl.hi[a]);
        if (t < 1.0) w *= (r == Ramp::Quintic ? quintic_step(t) : smooth_step(t));
    }
    return w;
}

SField make_box_weight(const Grid3& g, const Box& plateau, const Box& support, Ramp r) {
    SField f(g);
    const int nzp = g.nzp();
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        auto [x, y] = g.column_xy(c);
        for (int k = 0; k < nzp; ++k) f[c * nzp + k] = box_weight(plateau, support, x, y, g.z(k), r);
    }
    return f;
}

CutoffExtension CutoffExtension::around(const Box& q3, double eta) {
    require(eta > 0, "CutoffExtension: eta must be positive");
    CutoffExtension c;
    c.eta = eta;
    c.q3 = q3;
    c.q2 = q3.inflate(1.25 * eta);
    c.q1 = c.q2.inflate(1.25 * eta);
    return c;
}

namespace {
void check_region(const Grid3& g, const CutoffExtension& c) {
    const double ext[3] = {g.period(), g.period(), 1.0};
    for (int a = 0; a < 3; ++a) {
        if (std::isinf(c.q1.lo[a]) && std::isinf(c.q1.hi[a])) continue;
        if (c.q1.lo[a] < 0.0 || c.q1.hi[a] > ext[a])
            throw PreconditionError("extend: region mismatch, Q1 leaves the field's domain on axis " + std::to_string(a));
    }
}
} // namespace

SField extend(const SField& f, const CutoffExtension& c) {
    const Grid3& g = f.grid();
    check_region(g, c);
    SField out(g);
    const int nzp = g.nzp();
#pragma omp parallel for schedule(static)
    for (std::size_t col = 0; col < g.ncols(); ++col) {
        auto [x, y] = g.column_xy(col);
        for (int k = 0; k < nzp; ++k) {
            const double w = c.I2(x, y, g.z(k));
            out[col * nzp + k] = w == 0.0 ? 0.0 : w * f[col * nzp + k];
        }
    }
    return out;
}

HField extend(const HField& u, const CutoffExtension& c) { return HField(extend(u[0], c), extend(u[1], c)); }

namespace {
SField apply_nonlinearity(const HField& h, Nonlinearity f) {
    SField out(h.grid());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const double a = h[0][n], b = h[1][n];
        switch (f) {
        case Nonlinearity::Square: out[n] = a * a + b * b; break;
        case Nonlinearity::Product: out[n] = a * b; break;
        case Nonlinearity::Cube: out[n] = (a * a + b * b) * a; break;
        }
    }
    return out;
}
} // namespace

double prop21_check(const HField& h, Nonlinearity f, const SField& Psi, const CutoffExtension& c, double sigma) {
    const Grid3& g = h.grid();
    require_same_grid(g, Psi.grid(), "prop21_check");
    require(sigma > 0 && sigma < 0.5 * c.eta, "prop21_check: sigma must lie in (0, eta/2)");
    const int nzp = g.nzp();
    for (std::size_t col = 0; col < g.ncols(); ++col) {
        auto [x, y] = g.column_xy(col);
        for (int k = 0; k < nzp; ++k)
            if (Psi[col * nzp + k] != 0.0 && !c.q3.contains(x, y, g.z(k)))
                throw PreconditionError("prop21_check: support violation, Psi is nonzero outside Q3");
    }
    // Path 1: extend the nonlinearity of h.
    const SField lhs_field = extend(apply_nonlinearity(h, f), c);
    // Path 2: the nonlinearity of the extended h.
    const SField rhs_field = apply_nonlinearity(extend(h, c), f);
    const double d1 = std::abs(integrate_product(lhs_field, Psi) - integrate_product(rhs_field, Psi));
    const Mollifier m{sigma};
    const double d2 = std::abs(integrate_product(mollify(lhs_field, m), Psi) - integrate_product(mollify(rhs_field, m), Psi));
    return std::max(d1, d2);
}

} // namespace pelab
