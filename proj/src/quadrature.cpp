#include "pelab/quadrature.hpp"

namespace pelab {

double pairwise_sum(const double* a, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(a, h) + pairwise_sum(a + h, n - h);
}

double integrate(const SField& f) {
    const int nzp = f.grid().nzp();
    const double* v = f.data();
    return integrate_fn(f.grid(), [&](std::size_t c, int k) { return v[c * nzp + k]; });
}

double integrate_product(const SField& a, const SField& b) {
    require_same_grid(a.grid(), b.grid(), "integrate_product");
    const int nzp = a.grid().nzp();
    const double* x = a.data();
    const double* y = b.data();
    return integrate_fn(a.grid(), [&](std::size_t c, int k) {
        std::size_t n = c * nzp + k;
        return x[n] * y[n];
    });
}

double integrate_plane(const Grid3& g, const std::vector<double>& plane) {
    return pairwise_sum(plane) * g.hx() * g.hy();
}

} // namespace pelab
