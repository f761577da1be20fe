#include "pelab/reference.hpp"

#include <cmath>

namespace pelab::reference {

SField mollify_direct(const SField& f, const KernelStencil& st) {
    const Grid3& g = f.grid();
    const int nx = g.nx(), ny = g.ny(), nz = g.nz();
    SField out(g);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k <= nz; ++k) {
                double s = 0.0;
                for (const auto& t : st.taps) {
                    const int kk = k - t.dk;
                    if (kk < 0 || kk > nz) continue;
                    const int ii = ((i - t.di) % nx + nx) % nx;
                    const int jj = ((j - t.dj) % ny + ny) % ny;
                    s += t.w * f(ii, jj, kk);
                }
                out(i, j, k) = s;
            }
    return out;
}

double max_increment(const SField& f, const SField* f2, int di, int dj, int dk, int kmin, int kmax) {
    const Grid3& g = f.grid();
    const int nx = g.nx(), ny = g.ny();
    double m = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = kmin; k + dk <= kmax; ++k) {
                const int ii = ((i + di) % nx + nx) % nx;
                const int jj = ((j + dj) % ny + ny) % ny;
                double d = f(ii, jj, k + dk) - f(i, j, k);
                if (f2) {
                    const double e = (*f2)(ii, jj, k + dk) - (*f2)(i, j, k);
                    d = std::sqrt(d * d + e * e);
                }
                m = std::max(m, std::abs(d));
            }
    return m;
}

double integrate(const SField& f) {
    const Grid3& g = f.grid();
    double s = 0.0;
    for (std::size_t c = 0; c < g.ncols(); ++c)
        for (int k = 0; k <= g.nz(); ++k) {
            const double w = (k == 0 || k == g.nz()) ? 0.5 : 1.0;
            s += w * f[c * g.nzp() + k];
        }
    return s * g.hx() * g.hy() * g.hz();
}

} // namespace pelab::reference
