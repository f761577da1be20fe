#pragma once

#include "pelab/grid.hpp"
#include "pelab/holder.hpp"

#include <functional>
#include <vector>

namespace pelab {

/// Hydrostatic pressure: one value per horizontal column (z-independent by construction),
/// zero horizontal mean.
struct PressureField {
    Grid3 grid;
    std::vector<double> p;  ///< nx*ny values, index i*ny + j
    double at(int i, int j) const { return p[static_cast<std::size_t>(i) * grid.ny() + j]; }
    /// Replicates p along every column.
    SField to_sfield() const;
    double mean() const;
};

/// max over columns of |div_x int_0^1 u dz| (spectral divergence, trapezoid in z).
double column_constraint(const HField& u);

/// w(x,z) = -int_0^z div_x u(x,s) ds, spectral divergence and cumulative trapezoid;
/// w(.,0) = 0 exactly. Throws when the column constraint exceeds `tol`.
SField reconstruct_w(const HField& u, double tol = 1e-8);

/// Solves -Lap_x p = div_x div_x int_0^1 u (x) u dz spectrally with zero-mean gauge.
PressureField pressure_solve(const HField& u);

struct PressureRegularityRow {
    int n = 0;
    double seminorm_u = 0.0, seminorm_p = 0.0, ratio = 0.0;
};

/// ratio = seminorm(p)/(1 + seminorm(u)^2) on each grid of a refinement sequence.
std::vector<PressureRegularityRow> pressure_regularity_report(const std::function<HField(const Grid3&)>& make,
                                                              const std::vector<Grid3>& grids, double alpha, double beta);

} // namespace pelab
