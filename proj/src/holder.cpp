#include "pelab/holder.hpp"

#include "pelab/error.hpp"

#include <algorithm>
#include <cmath>

namespace pelab {

namespace {

constexpr double kExponentCeiling = 1.5;

struct Scan {
    const SField* f;
    const SField* f2;
};

double max_increment(const Scan& s, int di, int dj, int dk, int kmin, int kmax) {
    const Grid3& g = s.f->grid();
    const int nx = g.nx(), ny = g.ny();
    const double* a = s.f->data();
    const double* b = s.f2 ? s.f2->data() : nullptr;
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m) collapse(2)
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const int ii = ((i + di) % nx + nx) % nx;
            const int jj = ((j + dj) % ny + ny) % ny;
            const std::size_t p = g.index(i, j, 0), q = g.index(ii, jj, 0);
            for (int k = kmin; k + dk <= kmax; ++k) {
                double d = a[q + k + dk] - a[p + k];
                if (b) {
                    const double e = b[q + k + dk] - b[p + k];
                    d = std::sqrt(d * d + e * e);
                }
                m = std::max(m, std::abs(d));
            }
        }
    return m;
}

std::vector<int> dyadic_levels(int limit) {
    std::vector<int> v;
    for (int m = 1; m <= limit; m *= 2) v.push_back(m);
    return v;
}

HolderReport scan(const Scan& s, double alpha, double beta, const HolderOptions& o) {
    const Grid3& g = s.f->grid();
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError("holder: PeriodicChannel grid required");
    const int kmin = static_cast<int>(std::ceil(o.z_margin / g.hz() - 1e-9));
    const int kmax = g.nz() - kmin;
    require(kmin <= kmax, "holder: margin leaves no vertical nodes");

    HolderReport r;
    r.alpha = alpha;
    r.beta = beta;
    const auto hl = o.h_levels.empty() ? dyadic_levels(std::min(g.nx(), g.ny()) / 4) : o.h_levels;
    const auto zl = o.z_levels.empty() ? dyadic_levels(g.nz() / 4) : o.z_levels;

    double supH = 0.0, supZ = 0.0;
    for (int m : hl) {
        const double dx = m * g.hx(), dy = m * g.hy();
        const double ix = max_increment(s, m, 0, 0, kmin, kmax);
        const double iy = max_increment(s, 0, m, 0, kmin, kmax);
        r.offsetsH.push_back(std::max(dx, dy));
        r.maxIncH.push_back(std::max(ix, iy));
        supH = std::max({supH, ix / std::pow(dx, alpha), iy / std::pow(dy, alpha)});
        if (o.diagonals) {
            const double dd = std::hypot(dx, dy);
            const double d1 = max_increment(s, m, m, 0, kmin, kmax);
            const double d2 = max_increment(s, m, -m, 0, kmin, kmax);
            supH = std::max(supH, std::max(d1, d2) / std::pow(dd, alpha));
        }
    }
    for (int m : zl) {
        if (kmin + m > kmax) continue;
        const double dz = m * g.hz();
        const double iz = max_increment(s, 0, 0, m, kmin, kmax);
        r.offsetsZ.push_back(dz);
        r.maxIncZ.push_back(iz);
        supZ = std::max(supZ, iz / std::pow(dz, beta));
    }
    r.seminorm = supZ + supH;

    const double scale = std::max(1.0, std::max(s.f->max_abs(), s.f2 ? s.f2->max_abs() : 0.0));
    auto estimate = [&](const std::vector<double>& off, const std::vector<double>& inc, ScalingFit& fit, bool& degenerate) {
        const double top = inc.empty() ? 0.0 : *std::max_element(inc.begin(), inc.end());
        if (top <= 1e-13 * scale) {
            degenerate = true;
            return kExponentCeiling;
        }
        fit = fit_loglog(off, inc);
        if (fit.degenerate) {
            degenerate = true;
            return kExponentCeiling;
        }
        return std::clamp(fit.slope, 0.0, kExponentCeiling);
    };
    r.alphaHat = estimate(r.offsetsH, r.maxIncH, r.fitH, r.degenerateH);
    r.betaHat = estimate(r.offsetsZ, r.maxIncZ, r.fitZ, r.degenerateZ);
    return r;
}

void check_range(double alpha, double beta) {
    if (!(alpha > 0 && alpha < 1 && beta > 0 && beta < 1))
        throw PreconditionError("seminorm_aniso: exponents must lie in (0,1)");
}

ExponentEstimate to_estimate(const HolderReport& r, const Grid3& g) {
    if (r.offsetsH.size() < 5 || r.offsetsZ.size() < 5)
        throw PreconditionError("estimate_exponents: fewer than 5 resolvable dyadic offsets (grid " + std::to_string(g.nx()) +
                                "x" + std::to_string(g.ny()) + "x" + std::to_string(g.nz()) + ")");
    ExponentEstimate e;
    e.alphaHat = r.alphaHat;
    e.betaHat = r.betaHat;
    e.fitH = r.fitH;
    e.fitZ = r.fitZ;
    e.degenerate = r.degenerateH || r.degenerateZ;
    return e;
}

} // namespace

HolderReport holder_report(const HField& u, double alpha, double beta, const HolderOptions& o) {
    return scan({&u[0], &u[1]}, alpha, beta, o);
}

HolderReport holder_report(const SField& f, double alpha, double beta, const HolderOptions& o) {
    return scan({&f, nullptr}, alpha, beta, o);
}

double seminorm_aniso(const HField& u, double alpha, double beta, const HolderOptions& o) {
    check_range(alpha, beta);
    return holder_report(u, alpha, beta, o).seminorm;
}

double seminorm_aniso(const SField& f, double alpha, double beta, const HolderOptions& o) {
    check_range(alpha, beta);
    return holder_report(f, alpha, beta, o).seminorm;
}

ExponentEstimate estimate_exponents(const HField& u, const HolderOptions& o) {
    return to_estimate(holder_report(u, 0.5, 0.5, o), u.grid());
}

ExponentEstimate estimate_exponents(const SField& f, const HolderOptions& o) {
    return to_estimate(holder_report(f, 0.5, 0.5, o), f.grid());
}

std::string to_string(Regime r) {
    switch (r) {
    case Regime::InteriorRange: return "InteriorRange";
    case Regime::SmoothHorizontalRange: return "SmoothHorizontalRange";
    default: return "Inadmissible";
    }
}

Regime admissible(double alpha, double beta) {
    if (!(alpha > 0 && alpha < 2 && beta > 0 && beta < 1))
        throw PreconditionError("admissible: alpha must lie in (0,2) and beta in (0,1)");
    const double lo = std::min(alpha, beta), hi = std::max(alpha, beta);
    if (alpha > 0.5 && alpha < 1 && beta > 0.5 && beta < 1 && 2 * lo + hi > 2) return Regime::InteriorRange;
    if (alpha > 1 && alpha < 2 && beta < 0.5 && alpha + 2 * beta > 2) return Regime::SmoothHorizontalRange;
    return Regime::Inadmissible;
}

} // namespace pelab
