#include "pelab/scaling.hpp"

#include "pelab/error.hpp"

#include <cmath>

namespace pelab {

ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size(), "fit_loglog: size mismatch");
    ScalingFit f;
    f.x = x;
    f.y = y;
    const std::size_t n = x.size();
    if (n < 2) {
        f.degenerate = true;
        return f;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!(x[i] > 0) || !(y[i] > 0) || !std::isfinite(y[i])) {
            f.degenerate = true;
            return f;
        }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::log(x[i]) - mx, b = std::log(y[i]) - my;
        sxx += a * a;
        sxy += a * b;
        syy += b * b;
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::log(y[i]) - (f.intercept + f.slope * std::log(x[i]));
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    f.r2 = syy > 0 ? 1.0 - ss / syy : 1.0;
    return f;
}

ScalingFit fit_dyadic_sweep(const std::vector<double>& eps, const std::vector<double>& values) {
    require(eps.size() >= 4, "ScalingFit: at least 4 points required");
    for (std::size_t i = 1; i < eps.size(); ++i)
        require(std::abs(eps[i - 1] / eps[i] - 2.0) < 1e-9, "ScalingFit: eps must decrease by a factor of 2");
    return fit_loglog(eps, values);
}

std::vector<double> dyadic_list(double largest, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(largest / std::pow(2.0, i));
    return v;
}

} // namespace pelab
