#pragma once

#include "pelab/grid.hpp"

#include <cstddef>
#include <vector>

namespace pelab {

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(const double* a, std::size_t n);
inline double pairwise_sum(const std::vector<double>& a) { return pairwise_sum(a.data(), a.size()); }

/// Trapezoid weight of vertical node k (hz/2 at the ends, hz elsewhere).
inline double z_weight(const Grid3& g, int k) {
    return (k == 0 || k == g.nz()) ? 0.5 * g.hz() : g.hz();
}

/// Quadrature of f(column, k) over the grid's domain: periodic midpoint (or cell-centre) rule
/// horizontally, trapezoid vertically. Columns are summed in parallel and folded pairwise,
/// so the result is independent of the thread count.
template <class F>
double integrate_fn(const Grid3& g, F&& f) {
    const std::size_t nc = g.ncols();
    const int nzp = g.nzp();
    std::vector<double> col(nc);
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < nc; ++c) {
        double s = 0.5 * (f(c, 0) + f(c, nzp - 1));
        for (int k = 1; k < nzp - 1; ++k) s += f(c, k);
        col[c] = s;
    }
    return pairwise_sum(col) * g.hx() * g.hy() * g.hz();
}

double integrate(const SField& f);
/// Integral of the pointwise product a*b.
double integrate_product(const SField& a, const SField& b);

/// Horizontal (2-D) periodic quadrature of an nx*ny array laid out as i*ny + j.
double integrate_plane(const Grid3& g, const std::vector<double>& plane);

} // namespace pelab
