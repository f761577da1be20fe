#pragma once

#include <string>
#include <vector>

namespace pelab {

/// Least-squares line through (log x, log y).
struct ScalingFit {
    std::vector<double> x, y;
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
    double residual = 0.0;  ///< root-mean-square log residual
    bool degenerate = false;  ///< some y <= 0 or fewer than two points
};

ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

/// As fit_loglog, but additionally enforces the sweep contract: at least 4 points with x
/// strictly decreasing by a factor of two.
ScalingFit fit_dyadic_sweep(const std::vector<double>& eps, const std::vector<double>& values);

std::vector<double> dyadic_list(double largest, int count);

} // namespace pelab
