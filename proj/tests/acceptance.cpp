/// @file acceptance.cpp
/// @brief One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.

#include "pelab/boundary_geom.hpp"
#include "pelab/commutator.hpp"
#include "pelab/energy_budget.hpp"
#include "pelab/hydrostatics.hpp"
#include "pelab/mollify.hpp"
#include "pelab/quadrature.hpp"
#include "pelab/scenario.hpp"
#include "pelab/synthetic.hpp"
#include "pelab/visc_solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace pelab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %2d: %s  %s | %s\n", id, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

// Runs a criterion body; an exception counts as a failure with its message.
void criterion(int id, const std::string& what, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [pass, detail] = body();
        report(id, pass, what, detail);
    } catch (const std::exception& e) {
        report(id, false, what, std::string("exception: ") + e.what());
    }
}

std::string f(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct PairSweep {
    double alpha, beta;
    CommutatorReport rep;
    double seconds = 0.0;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int main() {
    constexpr double kPi = std::numbers::pi;
    const Grid3 g256 = Grid3::channel(256, 256, 256, 1.0);
    const std::vector<double> eps = dyadic_list(0.125, 5);
    const CommutatorSetup setup = CommutatorSetup::standard(g256);

    std::vector<PairSweep> sweeps;
    for (auto [a, b] : {std::pair{0.7, 0.7}, std::pair{0.9, 0.6}, std::pair{0.8, 0.8}}) {
        PairSweep s{a, b, {}, 0.0};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            SyntheticSpec spec;
            spec.alpha = a;
            spec.beta = b;
            spec.K = max_resolvable_octave(g256, 2.0);
            spec.column_balanced = true;
            s.rep = commutator_sweep(make_weierstrass(spec, g256), a, b, eps, setup);
        } catch (const std::exception& e) {
            std::printf("commutator sweep (%g,%g) failed: %s\n", a, b, e.what());
        }
        s.seconds = seconds_since(t0);
        sweeps.push_back(s);
    }

    criterion(1, "horizontal commutator slope >= min(3a-1, a+2b-1) - 0.15, <= 10 min per pair", [&] {
        bool ok = true;
        std::string d;
        for (const auto& s : sweeps) {
            const double bound = s.rep.predicted.e1 - 0.15;
            const bool pass = !s.rep.rows.empty() && s.rep.fitT1.slope >= bound && s.seconds <= 600.0;
            ok = ok && pass;
            d += "(" + f(s.alpha) + "," + f(s.beta) + "): " + f(s.rep.fitT1.slope) + " >= " + f(bound) + " in " +
                 f(s.seconds, 3) + "s; ";
        }
        return std::pair{ok, d};
    });

    criterion(2, "vertical commutator slope >= 2min+max-2 - 0.15 and sup d_z(psi u^e) slope >= b-1-0.1", [&] {
        bool ok = true;
        std::string d;
        for (const auto& s : sweeps) {
            const double b2 = s.rep.predicted.e2 - 0.15, bz = s.beta - 1.0 - 0.1;
            ok = ok && !s.rep.rows.empty() && s.rep.fitT2.slope >= b2 && s.rep.fitDz.slope >= bz;
            d += "(" + f(s.alpha) + "," + f(s.beta) + "): T2 " + f(s.rep.fitT2.slope) + " >= " + f(b2) + ", dz " +
                 f(s.rep.fitDz.slope) + " >= " + f(bz) + "; ";
        }
        return std::pair{ok, d};
    });

    criterion(3, "w-deficit slope >= a-1-0.15 (rough) and >= 1.8 (smooth)", [&] {
        bool ok = true;
        std::string d;
        for (const auto& s : sweeps) {
            const double bound = s.alpha - 1.0 - 0.15;
            ok = ok && !s.rep.rows.empty() && s.rep.fitW.slope >= bound;
            d += "(" + f(s.alpha) + "," + f(s.beta) + "): " + f(s.rep.fitW.slope) + " >= " + f(bound) + "; ";
        }
        SyntheticSpec smooth;
        smooth.K = 0;
        smooth.column_balanced = true;
        const ScalingFit w = w_deficit(make_weierstrass(smooth, g256), eps, setup);
        ok = ok && w.slope >= 1.8;
        d += "smooth: " + f(w.slope) + " >= 1.8";
        return std::pair{ok, d};
    });

    criterion(4, "CET identity defect <= 1e-10 relative on 20 random pairs", [&] {
        const Grid3 g = Grid3::channel(32, 32, 32, 1.0);
        double worst = 0.0;
        for (int seed = 1; seed <= 20; ++seed) {
            SyntheticSpec s;
            s.K = max_resolvable_octave(g, 2.0);
            s.seed = static_cast<std::uint64_t>(seed);
            const HField u = make_weierstrass(s, g);
            const CetTerms t = cet_decompose(u[0], u[1], Mollifier{0.0625 + 0.003125 * seed});
            worst = std::max(worst, t.defect / t.maxA);
        }
        return std::pair{worst <= 1e-10, "max relative defect " + f(worst)};
    });

    criterion(5, "cutoff-extension identities: quadrature defect <= 1e-10 with Psi supported in Q3", [&] {
        const Grid3 g = Grid3::channel(64, 64, 64, 1.0);
        Box q3;
        q3.lo = {0.35, 0.35, 0.35};
        q3.hi = {0.65, 0.65, 0.65};
        const CutoffExtension c = CutoffExtension::around(q3, 0.1);
        const SField Psi = make_box_weight(g, q3.inflate(-0.05), q3);
        SyntheticSpec s;
        s.K = 2;
        const HField h = make_weierstrass(s, g);
        double worst = 0.0;
        for (Nonlinearity nl : {Nonlinearity::Square, Nonlinearity::Product, Nonlinearity::Cube})
            worst = std::max(worst, prop21_check(h, nl, Psi, c, 0.04));
        const Mollifier m{0.04};
        worst = std::max(worst, std::abs(integrate_product(mollify(extend(h[0], c), m), Psi) -
                                         integrate_product(mollify(h[0], m), Psi)));
        return std::pair{worst <= 1e-10, "max defect " + f(worst)};
    });

    criterion(6, "hydrostatic pressure: Taylor-Green <= 1e-8, homogeneity <= 1e-12, exact z-independence", [&] {
        const Grid3 g = Grid3::channel(64, 64, 8);
        const HField u = taylor_green(g);
        const PressureField p = pressure_solve(u), p2 = pressure_solve(2.0 * u);
        double err = 0.0, hom = 0.0, pm = 0.0;
        for (std::size_t c = 0; c < g.ncols(); ++c) {
            const auto [x, y] = g.column_xy(c);
            err = std::max(err, std::abs(p.p[c] - 0.25 * (std::cos(2 * x) + std::cos(2 * y))));
            hom = std::max(hom, std::abs(p2.p[c] - 4.0 * p.p[c]));
            pm = std::max(pm, std::abs(p.p[c]));
        }
        hom /= std::max(1.0, 4.0 * pm);
        const SField ps = p.to_sfield();
        double zvar = 0.0;
        for (std::size_t c = 0; c < g.ncols(); ++c)
            for (int k = 1; k < g.nzp(); ++k) zvar = std::max(zvar, std::abs(ps[c * g.nzp() + k] - ps[c * g.nzp()]));
        return std::pair{err <= 1e-8 && hom <= 1e-12 && zvar == 0.0,
                         "error " + f(err) + ", homogeneity " + f(hom) + ", z-variation " + f(zvar)};
    });

    criterion(7, "local balance: Taylor-Green residual <= 1e-8 scale; mollified defect <= 5e-3, halving under refinement", [&] {
        const Grid3 g = Grid3::channel(64, 64, 16);
        const HField tg = taylor_green(g);
        Box plateau, support;
        plateau.lo = {0.2 * 2 * kPi, 0.15 * 2 * kPi, 0.35};
        plateau.hi = {0.55 * 2 * kPi, 0.6 * 2 * kPi, 0.6};
        support.lo = {0.1 * 2 * kPi, 0.05 * 2 * kPi, 0.2};
        support.hi = {0.7 * 2 * kPi, 0.7 * 2 * kPi, 0.75};
        const LocalResidual lr =
            local_residual(tg, tg, 1.0, SField(g), pressure_solve(tg).to_sfield(), make_box_weight(g, plateau, support));
        const bool tgOk = std::abs(lr.residual) <= 1e-8 * lr.scale;
        std::vector<double> rel;
        for (int n : {128, 256}) {
            const Grid3 h = Grid3::channel(n, n, n / 2, 1.0);
            SyntheticSpec s;
            s.K = 4;
            s.column_balanced = true;
            const HField u = make_weierstrass(s, h);
            const MollifiedBalance b = mollified_balance(u, reconstruct_w(u), pressure_solve(u).to_sfield(), Mollifier{0.125},
                                                         CommutatorSetup::standard(h).psi);
            rel.push_back(std::abs(b.defect()) / std::abs(b.leftSide));
        }
        const bool ok = tgOk && rel[1] <= 5e-3 && rel[1] <= 0.5 * rel[0];
        return std::pair{ok, "TG |residual|/scale " + f(std::abs(lr.residual) / lr.scale) + ", defect 128: " + f(rel[0]) +
                                 ", 256: " + f(rel[1])};
    });

    criterion(8, "geometry: tau endpoints/flatness, eta sup|grad psi| in [7,10], |Gamma|/eta^2 constant within 10%", [&] {
        const double eta = 1.0 / 16;
        const SmoothedCylinder sc(eta);
        const bool tauOk = std::abs(sc.tau(0.0) - eta) < 1e-15 && std::abs(sc.tau(eta) - 2 * eta) < 1e-15 &&
                           sc.tau_prime(0.0) == 0.0 && sc.tau_prime(0.99999 * eta) > 100.0;
        const double sup = sc.psi_grad_sup(1000000);
        const CornerNorms cn = corner_strip_norms(triples::bounded_corner(), {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128});
        double lo = 1e300, hi = 0.0, mean = 0.0, oracle = 0.0;
        for (const auto& r : cn.rows) {
            const double q = r.stripMeasure / (r.eta * r.eta);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
            mean += q / static_cast<double>(cn.rows.size());
            oracle = std::max(oracle, std::abs(r.stripMeasure - corner_strip_measure_exact(r.eta)) / r.stripMeasure);
        }
        const double spread = std::max(hi / mean - 1.0, 1.0 - lo / mean);
        const bool ok = tauOk && sup >= 7.0 && sup <= 10.0 && spread <= 0.1 && oracle <= 1e-6;
        return std::pair{ok, std::string("tau ") + (tauOk ? "ok" : "bad") + ", sup " + f(sup) + ", |Gamma|/eta^2 in [" +
                                 f(lo) + ", " + f(hi) + "], oracle error " + f(oracle)};
    });

    criterion(9, "boundary flux slope >= 2/3 - 0.1, mu1 + mu2 > 1 and mu2 > 1/3, leakage flagged", [&] {
        const std::vector<double> etas = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
        const FluxSweep fs = flux_sweep(triples::holder_slip(), etas);
        const CornerNorms cn = corner_strip_norms(triples::holder_slip(), etas);
        const FluxSweep leak = flux_sweep(triples::uniform_leakage(), etas);
        double leakMin = 1e300, leakMax = 0.0;
        for (const auto& r : leak.rows) {
            leakMin = std::min(leakMin, r.sideFlux);
            leakMax = std::max(leakMax, r.sideFlux);
        }
        const double bound = 2.0 / 3.0 - 0.1;
        const bool leakFlag = leakMin > 0.0 && leakMin >= 0.5 * leakMax;
        const bool ok = fs.fitSide.slope >= bound && fs.fitVertical.slope >= bound && cn.satisfied && leakFlag;
        return std::pair{ok, "side " + f(fs.fitSide.slope) + ", vertical " + f(fs.fitVertical.slope) + " >= " + f(bound) +
                                 ", mu1 " + f(cn.mu1) + ", mu2 " + f(cn.mu2) + ", leakage side flux in [" + f(leakMin) + ", " +
                                 f(leakMax) + "]"};
    });

    criterion(10, "viscous solver: energy inequality 1e-6 E0, eigenmode 1e-3, budget 1e-4 E0, monotone sweep", [&] {
        ViscRunConfig e;
        e.nu = 1.0;
        e.nx = 8;
        e.nz = 128;
        e.tEnd = 0.1;
        e.initialField = "eigenmode";
        e.advection = false;
        const ViscRun er = run(e);
        const double ampErr = std::abs(er.final.u(0, 0, e.nz) - std::exp(-e.nu * kPi * kPi / 4.0 * e.tEnd));

        ViscRunConfig c;
        c.nu = 0.1;
        c.tEnd = 1.0;
        const ViscRun r = run(c);  // throws NumericalGuard if the inequality fails in any step
        const double E0 = r.ledger.energy.front();
        double ineq = -1e300, defect = 0.0;
        for (std::size_t n = 1; n < r.ledger.t.size(); ++n) {
            ineq = std::max(ineq, (r.ledger.energy[n] + r.dt * r.ledger.dissipRate[n] - r.ledger.energy[n - 1]) / E0);
            defect = std::max(defect, std::abs(r.ledger.defect[n]) / E0);
        }
        const ViscositySweep sw = viscosity_sweep(c, {0.4, 0.2, 0.1, 0.05});
        const bool ok = ineq <= 1e-6 && ampErr <= 1e-3 && defect <= 1e-4 && sw.monotone;
        return std::pair{ok, "max step excess " + f(ineq) + " E0, eigenmode error " + f(ampErr) + ", budget defect " +
                                 f(defect) + " E0, sweep " + (sw.monotone ? "monotone" : "not monotone")};
    });

    criterion(11, "determinism: every scenario rerun gives byte-identical CSVs", [&] {
        const fs::path root = fs::temp_directory_path() / "pelab_acceptance_determinism";
        fs::remove_all(root);
        const std::vector<std::pair<std::string, std::vector<std::string>>> runs = {
            {"commutator-sweep", {"nx=128", "nz=128", "eps=1/8,1/16,1/32,1/64"}},
            {"pressure-solve", {"field=weierstrass", "nx=64"}},
            {"energy-budget", {"n_list=64"}},
            {"boundary-sweep", {"psi_samples=20000"}},
            {"corner-norms", {}},
            {"viscosity-sweep", {"tEnd=0.25", "nus=0.8,0.4,0.2,0.1"}},
            {"holder-estimate", {}},
            {"prop21-check", {}},
        };
        bool ok = true;
        std::string d;
        int files = 0;
        for (const auto& [name, sets] : runs) {
            std::vector<fs::path> dirs;
            for (const char* tag : {"a", "b"}) {
                ScenarioConfig c;
                c.scenario = name;
                for (const auto& s : sets) apply_override(c, s);
                dirs.push_back(root / (name + "_" + tag));
                c.params["out"] = dirs.back().string();
                const int rc = run_and_emit(c);
                if (rc > 1) {
                    ok = false;
                    d += name + " exit " + std::to_string(rc) + "; ";
                }
            }
            for (const auto& entry : fs::directory_iterator(dirs[0])) {
                if (entry.path().extension() != ".csv") continue;
                ++files;
                if (slurp(entry.path()) != slurp(dirs[1] / entry.path().filename())) {
                    ok = false;
                    d += name + "/" + entry.path().filename().string() + " differs; ";
                }
            }
        }
        fs::remove_all(root);
        return std::pair{ok, std::to_string(files) + " CSV files compared; " + (d.empty() ? "all identical" : d)};
    });

    std::printf("%s: %d criterion failure(s)\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
