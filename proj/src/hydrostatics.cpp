#include "pelab/hydrostatics.hpp"

#include "pelab/error.hpp"
#include "pelab/quadrature.hpp"
#include "pelab/spectral.hpp"

#include <cmath>
#include <sstream>

namespace pelab {

namespace {

void require_channel(const Grid3& g, const char* what) {
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError(std::string(what) + ": PeriodicChannel grid required");
}

// Trapezoid vertical integral of every column, as an nx*ny plane.
std::vector<double> column_integral(const SField& f) {
    const Grid3& g = f.grid();
    std::vector<double> out(g.ncols());
    const int nzp = g.nzp();
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const double* v = f.data() + c * nzp;
        double s = 0.5 * (v[0] + v[nzp - 1]);
        for (int k = 1; k < nzp - 1; ++k) s += v[k];
        out[c] = s * g.hz();
    }
    return out;
}

} // namespace

SField PressureField::to_sfield() const {
    SField f(grid);
    const int nzp = grid.nzp();
    for (std::size_t c = 0; c < grid.ncols(); ++c)
        for (int k = 0; k < nzp; ++k) f[c * nzp + k] = p[c];
    return f;
}

double PressureField::mean() const { return pairwise_sum(p) / static_cast<double>(p.size()); }

double column_constraint(const HField& u) {
    const Grid3& g = u.grid();
    require_channel(g, "column_constraint");
    const SField div = spectral_divergence(u);
    const auto d = column_integral(div);
    double m = 0.0;
    for (double v : d) m = std::max(m, std::abs(v));
    return m;
}

SField reconstruct_w(const HField& u, double tol) {
    const Grid3& g = u.grid();
    require_channel(g, "reconstruct_w");
    const SField div = spectral_divergence(u);
    const auto col = column_integral(div);
    double viol = 0.0;
    for (double v : col) viol = std::max(viol, std::abs(v));
    if (viol > tol) {
        std::ostringstream os;
        os << "reconstruct_w: column constraint violated, max |div_x int u dz| = " << viol << " > " << tol;
        throw PreconditionError(os.str());
    }
    SField w(g);
    const int nzp = g.nzp();
    const double hz = g.hz();
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const double* d = div.data() + c * nzp;
        double* out = w.data() + c * nzp;
        out[0] = 0.0;
        double s = 0.0;
        for (int k = 1; k < nzp; ++k) {
            s += 0.5 * hz * (d[k - 1] + d[k]);
            out[k] = -s;
        }
    }
    return w;
}

PressureField pressure_solve(const HField& u) {
    const Grid3& g = u.grid();
    require_channel(g, "pressure_solve");
    const auto m11 = column_integral(u[0] * u[0]);
    const auto m12 = column_integral(u[0] * u[1]);
    const auto m22 = column_integral(u[1] * u[1]);

    HorizontalFFT fft(g.nx(), g.ny(), 1, g.period());
    const std::size_t ns = static_cast<std::size_t>(g.nx()) * fft.nyc();
    fft.forward(m11.data());
    std::vector<cplx> s11(fft.spectrum(), fft.spectrum() + ns);
    fft.forward(m12.data());
    std::vector<cplx> s12(fft.spectrum(), fft.spectrum() + ns);
    fft.forward(m22.data());
    cplx* s = fft.spectrum();

    // f = div div M; its mean (k = 0 mode) must vanish for a periodic solution.
    double fmean = 0.0;
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < fft.nyc(); ++j) {
            const std::size_t n = fft.spec_index(i, j, 0);
            const double kx = fft.kx(i), ky = fft.ky(j);
            // Mixed terms use kx*ky, which is odd in each index: drop them on Nyquist lines.
            const double mix = fft.is_nyquist(i, j) ? 0.0 : 2.0 * kx * ky;
            const cplx f = -(kx * kx * s11[n] + mix * s12[n] + ky * ky * s[n]);
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) {
                fmean = std::abs(f) / (static_cast<double>(g.nx()) * g.ny());
                s[n] = 0.0;
            } else {
                s[n] = f / k2;
            }
        }
    if (fmean > 1e-10) {
        std::ostringstream os;
        os << "pressure_solve: source has nonzero mean " << fmean;
        throw PreconditionError(os.str());
    }
    PressureField p;
    p.grid = g;
    p.p.assign(static_cast<std::size_t>(g.nx()) * g.ny(), 0.0);
    fft.inverse(p.p.data());
    const double mu = p.mean();
    for (double& v : p.p) v -= mu;
    return p;
}

std::vector<PressureRegularityRow> pressure_regularity_report(const std::function<HField(const Grid3&)>& make,
                                                              const std::vector<Grid3>& grids, double alpha, double beta) {
    std::vector<PressureRegularityRow> rows;
    for (const auto& g : grids) {
        const HField u = make(g);
        const PressureField p = pressure_solve(u);
        PressureRegularityRow r;
        r.n = g.nx();
        r.seminorm_u = seminorm_aniso(u, alpha, beta);
        r.seminorm_p = seminorm_aniso(p.to_sfield(), alpha, beta);
        r.ratio = r.seminorm_p / (1.0 + r.seminorm_u * r.seminorm_u);
        rows.push_back(r);
    }
    return rows;
}

} // namespace pelab
