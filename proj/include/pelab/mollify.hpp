#pragma once

#include "pelab/grid.hpp"
#include "pelab/spectral.hpp"

#include <array>
#include <limits>
#include <vector>

namespace pelab {

/// Standard bump r -> exp(-1/(1-r^2)) on |r| < 1, zero elsewhere.
double bump_profile(double r);

struct Mollifier {
    double eps = 0.1;
    double kappa = 0.0;  ///< temporal width, 0 = no time mollification
};

/// Discrete kernel taps (offsets in cells), normalized to unit sum.
struct KernelStencil {
    std::vector<FftConvolver::Tap> taps;
    int ri = 0, rj = 0, rk = 0;
    double mass() const;
};

KernelStencil build_stencil(const Grid3& g, double eps);

enum class Backend { Auto, Serial, Parallel, FFT };

/// rho_eps * f: periodic horizontally, zero extension outside z in [0,1].
SField mollify(const SField& f, const Mollifier& m, Backend b = Backend::Auto);
HField mollify(const HField& u, const Mollifier& m, Backend b = Backend::Auto);

/// Reusable convolution for many fields with the same kernel.
class MollifyOperator {
public:
    MollifyOperator(const Grid3& g, const Mollifier& m, Backend b = Backend::Auto);
    ~MollifyOperator();
    MollifyOperator(const MollifyOperator&) = delete;
    MollifyOperator& operator=(const MollifyOperator&) = delete;
    SField operator()(const SField& f) const;
    const KernelStencil& stencil() const { return st_; }
    Backend backend() const { return b_; }

private:
    Grid3 g_;
    KernelStencil st_;
    Backend b_;
    mutable FftConvolver* fft_ = nullptr;
};

/// Time mollification of a snapshot sequence with spacing dt; returns the snapshots whose
/// kernel support lies inside the sequence (indices r .. n-1-r).
std::vector<SField> mollify_time(const std::vector<SField>& snaps, double dt, double kappa);

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Axis-aligned box; an infinite bound marks an unbounded (periodic) axis.
struct Box {
    std::array<double, 3> lo{-kInf, -kInf, -kInf};
    std::array<double, 3> hi{kInf, kInf, kInf};
    bool contains(double x, double y, double z) const;
    Box inflate(double d) const;
};

enum class Ramp { Quintic, Smooth };

/// 6t^5 - 15t^4 + 10t^3 clamped to [0,1].
double quintic_step(double t);
/// C-infinity step exp(-1/t) / (exp(-1/t) + exp(-1/(1-t))), clamped.
double smooth_step(double t);

/// Product of per-axis ramps: 1 on `plateau`, 0 outside `support`.
double box_weight(const Box& plateau, const Box& support, double x, double y, double z, Ramp r = Ramp::Quintic);
SField make_box_weight(const Grid3& g, const Box& plateau, const Box& support, Ramp r = Ramp::Quintic);

/// Nested boxes Q3 c Q2 c Q1 with margin 1.25*eta between levels and the plateau function
/// I2 (1 on Q2, 0 off Q1).
struct CutoffExtension {
    Box q3, q2, q1;
    double eta = 0.0;
    static CutoffExtension around(const Box& q3, double eta);
    double I2(double x, double y, double z) const { return box_weight(q2, q1, x, y, z); }
};

/// I2 * f with exact zeros outside Q1.
SField extend(const SField& f, const CutoffExtension& c);
HField extend(const HField& u, const CutoffExtension& c);

enum class Nonlinearity { Square, Product, Cube };

/// Larger of the two defects |<I2 f(h), Psi> - <f(I2 h), Psi>| and
/// |<rho * (I2 f(h)), Psi> - <rho * f(I2 h), Psi>|.
double prop21_check(const HField& h, Nonlinearity f, const SField& Psi, const CutoffExtension& c, double sigma);

} // namespace pelab
