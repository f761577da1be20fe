#pragma once

#include "pelab/grid.hpp"
#include "pelab/holder.hpp"
#include "pelab/mollify.hpp"
#include "pelab/scaling.hpp"

#include <string>
#include <vector>

namespace pelab {

struct Exponents {
    double e1 = 0.0;  ///< horizontal functional, eps^{e1}
    double e2 = 0.0;  ///< vertical functional, eps^{e2}
    double eW = 0.0;  ///< w-deficit, eps^{eW}
};

/// The printed exponent formulas without any admissibility check:
/// e1 = min(3a-1, a+2b-1), e2 = 2 min(a,b) + max(a,b) - 2, eW = a-1.
Exponents exponent_formulas(double alpha, double beta);

/// Exponents for an admissible pair; throws for Inadmissible.
Exponents predicted_exponents(double alpha, double beta, Regime r);
Exponents predicted_exponents(double alpha, double beta);

enum class DerivScheme { Centered, Spectral };

/// Horizontal (x or y) derivative of a channel field.
SField horizontal_derivative(const SField& f, HAxis axis, DerivScheme s);
/// Vertical derivative: centered inside, second-order one-sided at z = 0, 1.
SField vertical_derivative(const SField& f);
/// Fourth-order centered vertical derivative (one-sided fourth order near the ends).
SField vertical_derivative4(const SField& f);

/// Test weights and cutoff used by every commutator evaluation on a channel grid.
struct CommutatorSetup {
    CutoffExtension ext;  ///< vertical cutoff; horizontal axes are periodic and untouched
    SField psi;
    double chi = 1.0;
    /// psi: quintic-smoothstep bump, z plateau [5/16, 11/16] inside support [1/4, 3/4],
    /// horizontal plateau [1/4, 3/4] inside support [1/8, 7/8] (fractions of the period);
    /// I2 = 1 on z in [1/8, 7/8], 0 outside [1/16, 15/16].
    static CommutatorSetup standard(const Grid3& g, Ramp ramp = Ramp::Quintic);
    /// Largest eps for which psi keeps a 2 eps margin to z = 0, 1 and its eps-neighbourhood
    /// stays inside the plateau of I2.
    double max_eps() const;
};

struct CetTerms {
    SField A, B, C;
    double defect = 0.0;  ///< max |A - B + C|
    double maxA = 0.0;
};

/// A = u^e w^e - (uw)^e, B = (u - u^e)(w - w^e), C = int (u(X-Y)-u(X))(w(X-Y)-w(X)) rho_e(Y) dY,
/// each computed on its own path.
CetTerms cet_decompose(const SField& u, const SField& w, const Mollifier& m);

/// |chi int [(u (x) u)^e - u^e (x) u^e] : grad_x(psi u^e)|
double horizontal_functional(const HField& u, const Mollifier& m, double chi, const SField& psi,
                             DerivScheme s = DerivScheme::Centered);
/// |chi int [(u w)^e - u^e w^e] . d_z(psi u^e)|
double vertical_functional(const HField& u, const SField& w, const Mollifier& m, double chi, const SField& psi);

struct CommutatorRow {
    double eps = 0.0;
    double T1 = 0.0, T2 = 0.0;
    double wDeficit = 0.0, uDeficit = 0.0;
    double dzPsiU_sup = 0.0;
};

struct CommutatorReport {
    double alpha = 0.0, beta = 0.0;
    Regime regime = Regime::Inadmissible;
    Exponents predicted;
    std::vector<CommutatorRow> rows;
    ScalingFit fitT1, fitT2, fitW, fitDz;
};

/// One pass per eps over the extended fields u_bar = I2 u, w_bar = I2 w.
std::vector<CommutatorRow> commutator_rows(const HField& u_bar, const SField& w_bar, const std::vector<double>& eps,
                                           const CommutatorSetup& setup);

/// Full sweep for a synthetic field: extension, w reconstruction, functionals, fits.
CommutatorReport commutator_sweep(const HField& u, double alpha, double beta, const std::vector<double>& eps,
                                  const CommutatorSetup& setup);

/// ||w_bar - (w_bar)^eps||_inf over the support of psi for each eps, with its log-log fit.
ScalingFit w_deficit(const HField& u, const std::vector<double>& eps, const CommutatorSetup& setup);

} // namespace pelab
