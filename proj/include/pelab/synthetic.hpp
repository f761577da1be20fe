#pragma once

#include "pelab/grid.hpp"

#include <cstdint>

namespace pelab {

struct SyntheticSpec {
    double alpha = 0.7;   ///< horizontal Hölder exponent, (0,2)
    double beta = 0.7;    ///< vertical Hölder exponent, (0,1)
    int K = 7;            ///< highest octave index
    double lambda = 2.0;  ///< frequency ratio between octaves; integer so the field is periodic
    std::uint64_t seed = 1;
    bool zero_z_mean = false;
    /// Multiply the horizontal part by cos(pi z): the vertical mean of u is then x-independent,
    /// so w vanishes at the lid while staying nonzero inside.
    bool column_balanced = false;
    bool phases_zero = false;
};

void validate(const SyntheticSpec& s);

/// Largest K for which every octave is resolved on the grid (at most pi radians per cell).
int max_resolvable_octave(const Grid3& g, double lambda);

/// Sup-norm bound of the octaves k > K, per component.
double weierstrass_tail_bound(const SyntheticSpec& s);

/// u_i = sum_k lambda^{-alpha k}[cos(q lambda^k x + phi) + cos(q lambda^k y + chi)]
///     + sum_k lambda^{-beta k} cos(2 pi lambda^k z + theta),  q = 2 pi / period.
HField make_weierstrass(const SyntheticSpec& s, const Grid3& g);

/// Steady Taylor-Green cell u = (sin x cos y, -cos x sin y), scaled to the torus period.
HField taylor_green(const Grid3& g);

} // namespace pelab
