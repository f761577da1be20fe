#pragma once

#include "pelab/grid.hpp"
#include "pelab/scaling.hpp"

#include <string>
#include <vector>

namespace pelab {

struct HolderOptions {
    double z_margin = 0.0;      ///< restrict to vertical nodes with z in [margin, 1 - margin]
    std::vector<int> h_levels;  ///< horizontal offsets in cells; empty = 1, 2, 4, ... up to period/4
    std::vector<int> z_levels;  ///< vertical offsets in cells; empty = 1, 2, 4, ... up to 1/4
    bool diagonals = true;      ///< include the two horizontal diagonals in the seminorm
};

struct HolderReport {
    std::vector<double> offsetsH, maxIncH;  ///< axis offsets, max over the x and y axes
    std::vector<double> offsetsZ, maxIncZ;
    double alpha = 0.0, beta = 0.0;
    double seminorm = 0.0;
    double alphaHat = 0.0, betaHat = 0.0;
    ScalingFit fitH, fitZ;
    bool degenerateH = false, degenerateZ = false;
};

HolderReport holder_report(const HField& u, double alpha, double beta, const HolderOptions& o = {});
HolderReport holder_report(const SField& f, double alpha, double beta, const HolderOptions& o = {});

/// sup_z-offsets maxInc/|xi_z|^beta + sup_h-offsets maxInc/|xi_h|^alpha over the sampled offsets.
double seminorm_aniso(const HField& u, double alpha, double beta, const HolderOptions& o = {});
double seminorm_aniso(const SField& f, double alpha, double beta, const HolderOptions& o = {});

struct ExponentEstimate {
    double alphaHat = 0.0, betaHat = 0.0;
    ScalingFit fitH, fitZ;
    bool degenerate = false;  ///< some direction carries no increments; its exponent is 1.5
};

ExponentEstimate estimate_exponents(const HField& u, const HolderOptions& o = {});
ExponentEstimate estimate_exponents(const SField& f, const HolderOptions& o = {});

enum class Regime { InteriorRange, SmoothHorizontalRange, Inadmissible };

std::string to_string(Regime r);

/// Classifies (alpha, beta): interior range (1/2 < alpha, beta < 1 and
/// 2 min + max > 2) or the C^{1,alpha-1} range (1 < alpha < 2, beta < 1/2, alpha + 2 beta > 2).
Regime admissible(double alpha, double beta);

} // namespace pelab
