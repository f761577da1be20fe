#include "pelab/synthetic.hpp"

#include "pelab/error.hpp"
#include "pelab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace pelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Phases {
    // per octave, per component: phi (x), chi (y), theta (z)
    std::vector<std::array<double, 6>> p;
};

Phases draw_phases(const SyntheticSpec& s) {
    Phases ph;
    ph.p.resize(s.K + 1);
    std::mt19937_64 rng(s.seed);
    for (int k = 0; k <= s.K; ++k) {
        for (int q = 0; q < 6; ++q) {
            // 53 random bits mapped to [0, 2pi); avoids implementation-defined distributions.
            double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            ph.p[k][q] = s.phases_zero ? 0.0 : kTwoPi * u;
        }
    }
    return ph;
}

} // namespace

void validate(const SyntheticSpec& s) {
    if (!(s.alpha > 0 && s.alpha < 2)) throw PreconditionError("SyntheticSpec: alpha must lie in (0,2)");
    if (!(s.beta > 0 && s.beta < 1)) throw PreconditionError("SyntheticSpec: beta must lie in (0,1)");
    if (s.K < 0) throw PreconditionError("SyntheticSpec: K must be >= 0");
    if (!(s.lambda >= 2 && s.lambda == std::floor(s.lambda)))
        throw PreconditionError("SyntheticSpec: lambda must be an integer >= 2 on the torus");
}

int max_resolvable_octave(const Grid3& g, double lambda) {
    const double q = kTwoPi / g.period();
    int K = -1;
    while (true) {
        double f = std::pow(lambda, K + 1);
        if (q * f * std::max(g.hx(), g.hy()) > std::numbers::pi) break;
        if (kTwoPi * f * g.hz() > std::numbers::pi) break;
        ++K;
    }
    return K;
}

double weierstrass_tail_bound(const SyntheticSpec& s) {
    double b = 0.0;
    for (int k = s.K + 1; k < s.K + 200; ++k) b += 2.0 * std::pow(s.lambda, -s.alpha * k) + std::pow(s.lambda, -s.beta * k);
    return b;
}

HField make_weierstrass(const SyntheticSpec& s, const Grid3& g) {
    validate(s);
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError("make_weierstrass: PeriodicChannel grid required");
    if (s.K > max_resolvable_octave(g, s.lambda))
        throw PreconditionError("make_weierstrass: finest octave K=" + std::to_string(s.K) +
                                " is under-resolved on this grid (max " + std::to_string(max_resolvable_octave(g, s.lambda)) + ")");
    const Phases ph = draw_phases(s);
    const double q = kTwoPi / g.period();
    const int nx = g.nx(), ny = g.ny(), nzp = g.nzp();

    // Separable tables: hx_[comp][i], hy_[comp][j], v_[comp][k].
    std::array<std::vector<double>, 2> tx, ty, tz;
    for (int c = 0; c < 2; ++c) {
        tx[c].assign(nx, 0.0);
        ty[c].assign(ny, 0.0);
        tz[c].assign(nzp, 0.0);
        for (int k = 0; k <= s.K; ++k) {
            const double f = std::pow(s.lambda, k);
            const double aH = std::pow(s.lambda, -s.alpha * k);
            const double aV = std::pow(s.lambda, -s.beta * k);
            const auto& p = ph.p[k];
            for (int i = 0; i < nx; ++i) tx[c][i] += aH * std::cos(q * f * (i * g.hx()) + p[3 * c + 0]);
            for (int j = 0; j < ny; ++j) ty[c][j] += aH * std::cos(q * f * (j * g.hy()) + p[3 * c + 1]);
            for (int kk = 0; kk < nzp; ++kk) tz[c][kk] += aV * std::cos(kTwoPi * f * g.z(kk) + p[3 * c + 2]);
        }
        if (s.zero_z_mean) {
            double m = 0.0;
            for (int kk = 0; kk < nzp; ++kk) m += z_weight(g, kk) * tz[c][kk];
            for (int kk = 0; kk < nzp; ++kk) tz[c][kk] -= m;
        }
    }
    std::vector<double> bal(nzp, 1.0);
    if (s.column_balanced)
        for (int kk = 0; kk < nzp; ++kk) bal[kk] = std::cos(std::numbers::pi * g.z(kk));

    HField u(g);
    for (int c = 0; c < 2; ++c) {
        double* out = u[c].data();
#pragma omp parallel for schedule(static)
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const double h = tx[c][i] + ty[c][j];
                double* col = out + g.index(i, j, 0);
                for (int kk = 0; kk < nzp; ++kk) col[kk] = h * bal[kk] + tz[c][kk];
            }
    }
    return u;
}

HField taylor_green(const Grid3& g) {
    if (g.mode() != Mode::PeriodicChannel) throw PreconditionError("taylor_green: PeriodicChannel grid required");
    const double q = kTwoPi / g.period();
    HField u(g);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) {
            const double x = q * i * g.hx(), y = q * j * g.hy();
            const double a = std::sin(x) * std::cos(y), b = -std::cos(x) * std::sin(y);
            for (int k = 0; k < g.nzp(); ++k) {
                u[0](i, j, k) = a;
                u[1](i, j, k) = b;
            }
        }
    return u;
}

} // namespace pelab
