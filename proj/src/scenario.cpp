#include "pelab/scenario.hpp"

#include "pelab/boundary_geom.hpp"
#include "pelab/commutator.hpp"
#include "pelab/energy_budget.hpp"
#include "pelab/error.hpp"
#include "pelab/holder.hpp"
#include "pelab/hydrostatics.hpp"
#include "pelab/mollify.hpp"
#include "pelab/synthetic.hpp"
#include "pelab/visc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

namespace pelab {

namespace {

enum class Kind { Num, Int, List, Str, Bool };

struct Key {
    std::string name, value;
    Kind kind;
    std::vector<std::string> choices = {};
};

const std::string kTwoPi = "6.283185307179586";
const std::string kEtas = "1/16,1/32,1/64,1/128";

std::vector<Key> schema(const std::string& s) {
    std::vector<Key> k = {{"out", "out/" + s, Kind::Str}, {"seed", "1", Kind::Int}};
    const auto add = [&](std::vector<Key> more) { k.insert(k.end(), more.begin(), more.end()); };
    if (s == "commutator-sweep") {
        add({{"alpha", "0.7", Kind::Num},
             {"beta", "0.7", Kind::Num},
             {"K", "-1", Kind::Int},
             {"lambda", "2", Kind::Num},
             {"nx", "256", Kind::Int},
             {"nz", "256", Kind::Int},
             {"period", "1", Kind::Num},
             {"eps", "1/8,1/16,1/32,1/64,1/128", Kind::List},
             {"tol", "0.15", Kind::Num},
             {"dz_tol", "0.1", Kind::Num}});
    } else if (s == "pressure-solve") {
        add({{"field", "taylor-green", Kind::Str, {"taylor-green", "zero", "cos-y", "weierstrass"}},
             {"nx", "64", Kind::Int},
             {"nz", "8", Kind::Int},
             {"period", kTwoPi, Kind::Num},
             {"alpha", "0.7", Kind::Num},
             {"beta", "0.7", Kind::Num},
             {"K", "-1", Kind::Int},
             {"tol", "1e-8", Kind::Num},
             {"homogeneity_tol", "1e-12", Kind::Num}});
    } else if (s == "energy-budget") {
        add({{"alpha", "0.7", Kind::Num},
             {"beta", "0.7", Kind::Num},
             {"K", "4", Kind::Int},
             {"period", "1", Kind::Num},
             {"n_list", "64,128", Kind::List},
             {"eps", "0.125", Kind::Num},
             {"tol", "5e-3", Kind::Num},
             {"refine_ratio", "0.5", Kind::Num},
             {"tg_n", "64", Kind::Int},
             {"tg_tol", "1e-8", Kind::Num}});
    } else if (s == "boundary-sweep") {
        add({{"field", "holder-slip", Kind::Str,
              {"holder-slip", "holder-slip-time", "uniform-leakage", "interior-bump", "tangential", "bounded-corner"}},
             {"etas", kEtas, Kind::List},
             {"t", "0", Kind::Num},
             {"expect", "vanishing", Kind::Str, {"vanishing", "nonvanishing"}},
             {"tol", "0.1", Kind::Num},
             {"budget", "true", Kind::Bool},
             {"budget_tol", "0.15", Kind::Num},
             {"psi_samples", "100000", Kind::Int},
             {"psi_eta", "1/16", Kind::Num}});
    } else if (s == "corner-norms") {
        add({{"field", "bounded-corner", Kind::Str, {"bounded-corner", "holder-slip", "singular-corner", "tangential"}},
             {"etas", kEtas, Kind::List},
             {"t", "0", Kind::Num},
             {"rho0", "1e-6", Kind::Num},
             {"expect", "satisfied", Kind::Str, {"satisfied", "violated"}},
             {"measure_tol", "0.1", Kind::Num}});
    } else if (s == "viscosity-sweep") {
        add({{"nus", "0.4,0.2,0.1,0.05", Kind::List},
             {"nx", "32", Kind::Int},
             {"nz", "64", Kind::Int},
             {"period", kTwoPi, Kind::Num},
             {"tEnd", "1", Kind::Num},
             {"dt", "0", Kind::Num},
             {"initial", "smooth", Kind::Str, {"smooth", "eigenmode", "zero"}},
             {"amplitude", "1", Kind::Num},
             {"advection", "true", Kind::Bool},
             {"defect_tol", "1e-4", Kind::Num}});
    } else if (s == "holder-estimate") {
        add({{"alpha", "0.7", Kind::Num},
             {"beta", "0.5", Kind::Num},
             {"K", "-1", Kind::Int},
             {"lambda", "2", Kind::Num},
             {"nx", "128", Kind::Int},
             {"nz", "128", Kind::Int},
             {"period", "1", Kind::Num},
             {"tol", "0.1", Kind::Num}});
    } else if (s == "prop21-check") {
        add({{"nx", "64", Kind::Int},
             {"nz", "64", Kind::Int},
             {"period", "1", Kind::Num},
             {"q3_lo", "0.35", Kind::Num},
             {"q3_hi", "0.65", Kind::Num},
             {"eta", "0.1", Kind::Num},
             {"sigma", "0.04", Kind::Num},
             {"nonlinearity", "square", Kind::Str, {"square", "product", "cube"}},
             {"trials", "5", Kind::Int},
             {"tol", "1e-10", Kind::Num}});
    } else {
        throw ConfigError("unknown scenario '" + s + "'");
    }
    return k;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Decimal number or a ratio "a/b".
bool to_number(const std::string& text, double& v) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    const auto slash = t.find('/');
    if (slash != std::string::npos) {
        double a, b;
        if (!to_number(t.substr(0, slash), a) || !to_number(t.substr(slash + 1), b) || b == 0.0) return false;
        v = a / b;
        return true;
    }
    char* end = nullptr;
    v = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

void check_value(const Key& k, const std::string& v) {
    const auto bad = [&](const std::string& what) {
        throw ConfigError("parameter '" + k.name + "': " + what + " (got '" + v + "')");
    };
    double d;
    switch (k.kind) {
    case Kind::Num:
        if (!to_number(v, d)) bad("expected a number");
        break;
    case Kind::Int:
        if (!to_number(v, d) || d != std::floor(d) || std::abs(d) > 1e9) bad("expected an integer");
        break;
    case Kind::List:
        if (trim(v).empty()) break;
        for (const auto& item : split(v, ','))
            if (!to_number(item, d)) bad("expected a comma-separated list of numbers");
        break;
    case Kind::Bool:
        if (v != "true" && v != "false") bad("expected true or false");
        break;
    case Kind::Str:
        if (!k.choices.empty() && std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
            std::string all;
            for (const auto& c : k.choices) all += (all.empty() ? "" : ", ") + c;
            bad("expected one of " + all);
        }
        if (k.name == "out" && trim(v).empty()) bad("must not be empty");
        break;
    }
}

// Typed read access to a resolved parameter map.
struct Params {
    const std::map<std::string, std::string>& m;
    const std::string& str(const std::string& k) const { return m.at(k); }
    double num(const std::string& k) const {
        double v = 0.0;
        to_number(m.at(k), v);
        return v;
    }
    int integer(const std::string& k) const { return static_cast<int>(std::lround(num(k))); }
    bool flag(const std::string& k) const { return m.at(k) == "true"; }
    std::vector<double> list(const std::string& k) const {
        std::vector<double> out;
        if (trim(m.at(k)).empty()) return out;
        for (const auto& item : split(m.at(k), ',')) {
            double v = 0.0;
            to_number(item, v);
            out.push_back(v);
        }
        return out;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string fmt_csv(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

void rule(ScenarioResult& r, const std::string& name, bool pass, const std::string& detail) {
    r.rules.push_back({name, pass, detail});
}

void value(ScenarioResult& r, const std::string& k, double v) { r.values.emplace_back(k, fmt(v)); }
void value(ScenarioResult& r, const std::string& k, const std::string& v) { r.values.emplace_back(k, v); }

std::string ge(double measured, double bound) { return fmt(measured) + " >= " + fmt(bound); }
std::string le(double measured, double bound) { return fmt(measured) + " <= " + fmt(bound); }

SyntheticSpec synthetic(const Params& p, const Grid3& g, bool columnBalanced) {
    SyntheticSpec s;
    s.alpha = p.num("alpha");
    s.beta = p.num("beta");
    s.lambda = p.m.count("lambda") ? p.num("lambda") : 2.0;
    s.seed = static_cast<std::uint64_t>(p.integer("seed"));
    s.column_balanced = columnBalanced;
    const int K = p.integer("K");
    s.K = K < 0 ? max_resolvable_octave(g, s.lambda) : K;
    return s;
}

// ---------------------------------------------------------------- scenarios

void commutator_sweep_scenario(const Params& p, ScenarioResult& r) {
    const double a = p.num("alpha"), b = p.num("beta"), tol = p.num("tol");
    r.formulas = {"horizontal functional |chi int [(u (x) u)^e - u^e (x) u^e] : grad_x(psi u^e)| ~ eps^{min(3 alpha - 1, alpha + 2 beta - 1)}",
                  "vertical functional |chi int [(u w)^e - u^e w^e] . d_z(psi u^e)| ~ eps^{2 min(alpha,beta) + max(alpha,beta) - 2}",
                  "sup |d_z(psi u^e)| ~ eps^{beta - 1}",
                  "w-deficit ||w - w^e||_inf ~ eps^{alpha - 1}"};
    CsvTable t{"commutator.csv", {"eps", "T1", "T2", "wDeficit", "uDeficit", "dzPsiU_sup"}, {}};
    const auto eps = p.list("eps");
    const Exponents e = predicted_exponents(a, b);
    value(r, "regime", to_string(admissible(a, b)));
    value(r, "predicted.e1", e.e1);
    value(r, "predicted.e2", e.e2);
    value(r, "predicted.eW", e.eW);
    if (eps.empty()) {
        r.skipped = true;
        r.tables.push_back(t);
        return;
    }
    const int n = p.integer("nx");
    const Grid3 g = Grid3::channel(n, n, p.integer("nz"), p.num("period"));
    const SyntheticSpec s = synthetic(p, g, true);
    value(r, "K", s.K);
    const HField u = make_weierstrass(s, g);
    const CommutatorSetup setup = CommutatorSetup::standard(g);
    const CommutatorReport rep = commutator_sweep(u, a, b, eps, setup);
    for (const auto& row : rep.rows) t.rows.push_back({row.eps, row.T1, row.T2, row.wDeficit, row.uDeficit, row.dzPsiU_sup});
    r.tables.push_back(t);
    value(r, "fitted.T1", rep.fitT1.slope);
    value(r, "fitted.T2", rep.fitT2.slope);
    value(r, "fitted.dz", rep.fitDz.slope);
    value(r, "fitted.wDeficit", rep.fitW.slope);
    rule(r, "T1_slope", rep.fitT1.slope >= e.e1 - tol, ge(rep.fitT1.slope, e.e1 - tol));
    rule(r, "T2_slope", rep.fitT2.slope >= e.e2 - tol, ge(rep.fitT2.slope, e.e2 - tol));
    const double dzb = b - 1.0 - p.num("dz_tol");
    rule(r, "dz_sup_slope", rep.fitDz.slope >= dzb, ge(rep.fitDz.slope, dzb));
    rule(r, "w_deficit_slope", rep.fitW.slope >= e.eW - tol, ge(rep.fitW.slope, e.eW - tol));
}

void pressure_scenario(const Params& p, ScenarioResult& r) {
    r.formulas = {"hydrostatic pressure: -Lap_x p = div_x div_x int_0^1 u (x) u dz, zero horizontal mean",
                  "Taylor-Green oracle p = (cos 2qx + cos 2qy)/4, q = 2 pi/period"};
    const int n = p.integer("nx");
    const Grid3 g = Grid3::channel(n, n, p.integer("nz"), p.num("period"));
    const std::string field = p.str("field");
    HField u(g);
    if (field == "taylor-green") {
        u = taylor_green(g);
    } else if (field == "cos-y") {
        const double q = 2.0 * std::numbers::pi / g.period();
        for (std::size_t c = 0; c < g.ncols(); ++c) {
            const double y = g.column_xy(c).second;
            for (int k = 0; k < g.nzp(); ++k) u[0][c * g.nzp() + k] = std::cos(q * y);
        }
    } else if (field == "weierstrass") {
        u = make_weierstrass(synthetic(p, g, false), g);
    }
    const PressureField pf = pressure_solve(u);
    const bool hasExact = field != "weierstrass";
    const double q = 2.0 * std::numbers::pi / g.period();
    CsvTable t{"pressure.csv", {"x", "y", "p"}, {}};
    if (hasExact) t.header.push_back("p_exact");
    double err = 0.0, pmax = 0.0;
    for (std::size_t c = 0; c < g.ncols(); ++c) {
        const auto [x, y] = g.column_xy(c);
        const double pv = pf.p[c];
        pmax = std::max(pmax, std::abs(pv));
        std::vector<double> row{x, y, pv};
        if (hasExact) {
            const double ex = field == "taylor-green" ? 0.25 * (std::cos(2 * q * x) + std::cos(2 * q * y)) : 0.0;
            err = std::max(err, std::abs(pv - ex));
            row.push_back(ex);
        }
        t.rows.push_back(row);
    }
    r.tables.push_back(t);
    value(r, "max_abs_p", pmax);
    if (hasExact) {
        value(r, "max_error", err);
        rule(r, "closed_form", err <= p.num("tol"), le(err, p.num("tol")));
    }
    const PressureField p2 = pressure_solve(2.0 * u);
    double hom = 0.0;
    for (std::size_t c = 0; c < g.ncols(); ++c) hom = std::max(hom, std::abs(p2.p[c] - 4.0 * pf.p[c]));
    const double homRel = hom / std::max(1.0, 4.0 * pmax);
    value(r, "homogeneity_defect", homRel);
    rule(r, "quadratic_homogeneity", homRel <= p.num("homogeneity_tol"), le(homRel, p.num("homogeneity_tol")));
    const SField ps = pf.to_sfield();
    double zvar = 0.0;
    for (std::size_t c = 0; c < g.ncols(); ++c)
        for (int k = 1; k < g.nzp(); ++k) zvar = std::max(zvar, std::abs(ps[c * g.nzp() + k] - ps[c * g.nzp()]));
    value(r, "z_variation", zvar);
    rule(r, "z_independent", zvar == 0.0, le(zvar, 0.0));
}

SField shifted_psi(const Grid3& g) {
    const double L = g.period();
    Box plateau, support;
    plateau.lo = {0.2 * L, 0.15 * L, 0.35};
    plateau.hi = {0.55 * L, 0.6 * L, 0.6};
    support.lo = {0.1 * L, 0.05 * L, 0.2};
    support.hi = {0.7 * L, 0.7 * L, 0.75};
    return make_box_weight(g, plateau, support);
}

void energy_budget_scenario(const Params& p, ScenarioResult& r) {
    r.formulas = {"tested local energy balance d_t <|u|^2/2, psi> = <(|u|^2/2 + p) u, grad_x psi> + <(|u|^2/2 + p) w, d_z psi>",
                  "mollified balance flux - tendency = -int R : grad_x(psi u^e) - int R_w . d_z(psi u^e), "
                  "R = (u (x) u)^e - u^e (x) u^e, R_w = (u w)^e - u^e w^e"};
    // Steady Taylor-Green cell: the local residual vanishes up to quadrature error.
    {
        const int n = p.integer("tg_n");
        const Grid3 g = Grid3::channel(n, n, 16);
        const HField u = taylor_green(g);
        const SField w(g);
        const SField pr = pressure_solve(u).to_sfield();
        const SField psi = shifted_psi(g);
        std::vector<EnergySnapshot> snaps;
        for (double t : {0.0, 0.5, 1.0}) snaps.push_back({t, u, w, pr});
        const EnergyLedger L = energy_ledger(snaps, psi);
        CsvTable lt{"ledger.csv", {"t", "kinetic", "fluxH", "fluxV", "residual"}, {}};
        for (std::size_t i = 0; i < L.time.size(); ++i)
            lt.rows.push_back({L.time[i], L.kinetic[i], L.fluxH[i], L.fluxV[i], L.residual[i]});
        r.tables.push_back(lt);
        const LocalResidual lr = local_residual(snaps[0], snaps[2], psi);
        value(r, "taylor_green.residual", lr.residual);
        value(r, "taylor_green.scale", lr.scale);
        const double bound = p.num("tg_tol") * lr.scale;
        rule(r, "taylor_green_residual", std::abs(lr.residual) <= bound, le(std::abs(lr.residual), bound));
    }
    CsvTable t{"balance.csv", {"n", "eps", "flux", "tendency", "leftSide", "rhs1", "rhs2", "defect", "relDefect"}, {}};
    const auto ns = p.list("n_list");
    if (ns.empty()) {
        r.skipped = true;
        r.tables.push_back(t);
        return;
    }
    const Mollifier m{p.num("eps")};
    std::vector<double> rel;
    for (double nd : ns) {
        const int n = static_cast<int>(nd);
        const Grid3 g = Grid3::channel(n, n, n / 2, p.num("period"));
        const HField u = make_weierstrass(synthetic(p, g, true), g);
        const SField w = reconstruct_w(u);
        const SField pr = pressure_solve(u).to_sfield();
        const CommutatorSetup setup = CommutatorSetup::standard(g);
        const MollifiedBalance b = mollified_balance(u, w, pr, m, setup.psi);
        const double rd = std::abs(b.defect()) / std::max(std::abs(b.leftSide), 1e-12);
        rel.push_back(rd);
        t.rows.push_back({nd, m.eps, b.flux, b.tendency, b.leftSide, b.rhs1, b.rhs2, b.defect(), rd});
        value(r, "relDefect.n" + std::to_string(n), rd);
    }
    r.tables.push_back(t);
    rule(r, "balance_defect", rel.back() <= p.num("tol"), le(rel.back(), p.num("tol")));
    if (rel.size() > 1) {
        bool halving = true;
        std::string d;
        for (std::size_t i = 1; i < rel.size(); ++i) {
            halving = halving && rel[i] <= p.num("refine_ratio") * rel[i - 1];
            d += (d.empty() ? "" : ", ") + fmt(rel[i] / rel[i - 1]);
        }
        rule(r, "refinement_halving", halving, "ratios " + d + " <= " + fmt(p.num("refine_ratio")));
    }
}

FieldTriple boundary_field(const std::string& name, double rho0) {
    if (name == "holder-slip") return triples::holder_slip();
    if (name == "holder-slip-time") return triples::holder_slip_time();
    if (name == "uniform-leakage") return triples::uniform_leakage();
    if (name == "interior-bump") return triples::interior_bump();
    if (name == "tangential") return triples::tangential();
    if (name == "bounded-corner") return triples::bounded_corner();
    return triples::singular_corner(rho0);
}

bool all_small(const std::vector<double>& v, double tiny) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return std::abs(x) <= tiny; });
}

void boundary_scenario(const Params& p, ScenarioResult& r) {
    r.formulas = {"side flux (1/eta) int_{5eta/4 < wall distance < 3eta/2} |(|u|^2/2 + p) u.n| ~ eta^{2/3} for Holder-2/3 slip fields",
                  "vertical flux (1/eta) int_{eta-strips at z = 0, 1} |(|u|^2/2 + p) w|",
                  "boundary budget -int int (|u|^2/2 + p) U.N (1/eta) phi'(d_eta/eta) dX dt -> 0",
                  "cutoff gradient eta sup |grad psi_eta| <= 10"};
    const FieldTriple f = boundary_field(p.str("field"), 1e-6);
    const double t0 = p.num("t");
    if (p.integer("psi_samples") > 0) {
        const SmoothedCylinder sc(p.num("psi_eta"));
        const double sup = sc.psi_grad_sup(static_cast<std::size_t>(p.integer("psi_samples")));
        value(r, "psi_grad_sup", sup);
        rule(r, "psi_gradient_bound", sup >= 7.0 && sup <= 10.0, fmt(sup) + " in [7, 10]");
    }
    const auto etas = p.list("etas");
    CsvTable ft{"flux.csv", {"eta", "sideFlux", "verticalFlux"}, {}};
    CsvTable bt{"budget.csv", {"eta", "value"}, {}};
    if (etas.empty()) {
        r.skipped = true;
        r.tables = {ft, bt};
        return;
    }
    const FluxSweep fs = flux_sweep(f, etas, t0);
    std::vector<double> side, vert;
    for (const auto& row : fs.rows) {
        ft.rows.push_back({row.eta, row.sideFlux, row.verticalFlux});
        side.push_back(row.sideFlux);
        vert.push_back(row.verticalFlux);
    }
    r.tables.push_back(ft);
    const double slip = slip_violation(f, t0);
    value(r, "slip_violation", slip);
    if (p.str("expect") == "vanishing") {
        const double bound = 2.0 / 3.0 - p.num("tol");
        const auto check = [&](const std::string& name, const std::vector<double>& v, const ScalingFit& fit) {
            if (all_small(v, 1e-14)) {
                rule(r, name, true, "identically zero");
            } else {
                value(r, "fitted." + name, fit.slope);
                rule(r, name, !fit.degenerate && fit.slope >= bound, ge(fit.slope, bound));
            }
        };
        check("side_flux_slope", side, fs.fitSide);
        check("vertical_flux_slope", vert, fs.fitVertical);
    } else {
        const double lo = *std::min_element(side.begin(), side.end());
        const double hi = *std::max_element(side.begin(), side.end());
        value(r, "side_flux_min", lo);
        rule(r, "side_flux_nonvanishing", lo > 0.0 && lo >= 0.5 * hi, fmt(lo) + " >= 0.5 * " + fmt(hi));
    }
    if (p.flag("budget")) {
        if (slip > 1e-10) {
            value(r, "budget", "not evaluated: slip condition violated");
        } else {
            const BudgetLimit bl = global_budget_limit(f, etas, t0, t0 + 1.0);
            for (std::size_t i = 0; i < bl.eta.size(); ++i) bt.rows.push_back({bl.eta[i], bl.value[i]});
            if (all_small(bl.value, 1e-10)) {
                rule(r, "budget_limit", true, "identically zero");
            } else {
                const double bound = 2.0 / 3.0 - p.num("budget_tol");
                value(r, "fitted.budget", bl.fit.slope);
                rule(r, "budget_limit", !bl.fit.degenerate && bl.fit.slope >= bound, ge(bl.fit.slope, bound));
            }
        }
    }
    r.tables.push_back(bt);
}

void corner_scenario(const Params& p, ScenarioResult& r) {
    r.formulas = {"corner strip Gamma_eta: points within eta of the two corner circles, |Gamma_eta| = pi^2 eta^2 (1 - 4 eta/(3 pi))",
                  "||p||_{L^{3/2}(Gamma_eta)} ~ eta^{mu1}, ||U||_{L^3(Gamma_eta)} ~ eta^{mu2}, condition mu1 + mu2 > 1 and mu2 > 1/3"};
    const FieldTriple f = boundary_field(p.str("field"), p.num("rho0"));
    const auto etas = p.list("etas");
    CsvTable t{"corner.csv", {"eta", "pNorm", "UNorm", "stripMeasure", "stripMeasureExact"}, {}};
    if (etas.empty()) {
        r.skipped = true;
        r.tables.push_back(t);
        return;
    }
    const CornerNorms cn = corner_strip_norms(f, etas, p.num("t"));
    double lo = kInf, hi = 0.0, exactErr = 0.0, mean = 0.0;
    for (const auto& row : cn.rows) {
        const double ex = corner_strip_measure_exact(row.eta);
        t.rows.push_back({row.eta, row.pNorm, row.UNorm, row.stripMeasure, ex});
        const double ratio = row.stripMeasure / (row.eta * row.eta);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        mean += ratio / static_cast<double>(cn.rows.size());
        exactErr = std::max(exactErr, std::abs(row.stripMeasure - ex) / ex);
    }
    r.tables.push_back(t);
    value(r, "mu1", cn.mu1);
    value(r, "mu2", cn.mu2);
    value(r, "measure_ratio_min", lo);
    value(r, "measure_ratio_max", hi);
    const double spread = std::max(hi / mean - 1.0, 1.0 - lo / mean);
    rule(r, "measure_constant", spread <= p.num("measure_tol"), le(spread, p.num("measure_tol")));
    rule(r, "measure_closed_form", exactErr <= 1e-6, le(exactErr, 1e-6));
    const bool want = p.str("expect") == "satisfied";
    rule(r, "corner_condition", cn.satisfied == want,
         std::string(cn.satisfied ? "satisfied" : "violated") + ", expected " + p.str("expect"));
}

void viscosity_scenario(const Params& p, ScenarioResult& r) {
    r.formulas = {"viscous slice d_t u + d_x(uu) + d_z(uw) + d_x p = nu (d_xx + d_zz) u, u = 0 at z = 0, d_z u = 0 at z = 1",
                  "energy inequality E(t) + nu int_0^t int |grad u|^2 <= E(0)",
                  "vanishing viscosity trend: nu int_0^T int |grad u|^2 decreases with nu"};
    CsvTable t{"sweep.csv", {"nu", "totalDissipation", "finalEnergy", "initialEnergy", "maxDefect"}, {}};
    const auto nus = p.list("nus");
    if (nus.empty()) {
        r.skipped = true;
        r.tables.push_back(t);
        return;
    }
    ViscRunConfig base;
    base.nx = p.integer("nx");
    base.nz = p.integer("nz");
    base.period = p.num("period");
    base.tEnd = p.num("tEnd");
    base.dt = p.num("dt");
    base.initialField = p.str("initial");
    base.amplitude = p.num("amplitude");
    base.advection = p.flag("advection");
    base.seed = static_cast<std::uint64_t>(p.integer("seed"));
    const ViscositySweep sw = viscosity_sweep(base, nus);
    bool closed = true;
    double worst = 0.0;
    for (const auto& row : sw.rows) {
        t.rows.push_back({row.nu, row.totalDissipation, row.finalEnergy, row.initialEnergy, row.maxDefect});
        const double rel = row.initialEnergy > 0.0 ? row.maxDefect / row.initialEnergy : row.maxDefect;
        worst = std::max(worst, rel);
        closed = closed && rel <= p.num("defect_tol");
    }
    r.tables.push_back(t);
    value(r, "monotone", sw.monotone ? "true" : "false");
    value(r, "fitted.dissipation_vs_nu", sw.fit.degenerate ? std::string("degenerate") : fmt(sw.fit.slope));
    value(r, "max_relative_defect", worst);
    rule(r, "monotone_dissipation", sw.monotone, sw.monotone ? "strictly decreasing" : "not strictly decreasing");
    rule(r, "budget_closure", closed, le(worst, p.num("defect_tol")));
}

void holder_scenario(const Params& p, ScenarioResult& r) {
    r.formulas = {"anisotropic Holder seminorm sup |u(x+h) - u(x)|/|h|^alpha + sup |u(z+d) - u(z)|/|d|^beta",
                  "exponent estimate: log-log slope of the maximal increment against the offset"};
    const int n = p.integer("nx");
    const Grid3 g = Grid3::channel(n, n, p.integer("nz"), p.num("period"));
    const SyntheticSpec s = synthetic(p, g, false);
    const HField u = make_weierstrass(s, g);
    const HolderReport h = holder_report(u, s.alpha, s.beta);
    CsvTable th{"holder_h.csv", {"offset", "maxIncrement"}, {}}, tz{"holder_z.csv", {"offset", "maxIncrement"}, {}};
    for (std::size_t i = 0; i < h.offsetsH.size(); ++i) th.rows.push_back({h.offsetsH[i], h.maxIncH[i]});
    for (std::size_t i = 0; i < h.offsetsZ.size(); ++i) tz.rows.push_back({h.offsetsZ[i], h.maxIncZ[i]});
    r.tables = {th, tz};
    value(r, "K", s.K);
    value(r, "seminorm", h.seminorm);
    value(r, "alphaHat", h.alphaHat);
    value(r, "betaHat", h.betaHat);
    const double tol = p.num("tol");
    rule(r, "alpha_estimate", std::abs(h.alphaHat - s.alpha) <= tol, "|" + fmt(h.alphaHat) + " - " + fmt(s.alpha) + "| <= " + fmt(tol));
    rule(r, "beta_estimate", std::abs(h.betaHat - s.beta) <= tol, "|" + fmt(h.betaHat) + " - " + fmt(s.beta) + "| <= " + fmt(tol));
}

void prop21_scenario(const Params& p, ScenarioResult& r) {
    r.formulas = {"cutoff extension: <I2 f(h), Psi> = <f(I2 h), Psi> and <rho_s * I2 f(h), Psi> = <rho_s * f(I2 h), Psi> for Psi supported in Q3, s < eta/2"};
    const int n = p.integer("nx");
    const Grid3 g = Grid3::channel(n, n, p.integer("nz"), p.num("period"));
    const double L = g.period();
    Box q3;
    q3.lo = {p.num("q3_lo") * L, p.num("q3_lo") * L, p.num("q3_lo")};
    q3.hi = {p.num("q3_hi") * L, p.num("q3_hi") * L, p.num("q3_hi")};
    const CutoffExtension ext = CutoffExtension::around(q3, p.num("eta"));
    const SField Psi = make_box_weight(g, q3.inflate(-0.25 * (p.num("q3_hi") - p.num("q3_lo"))), q3);
    const std::string nl = p.str("nonlinearity");
    const Nonlinearity f = nl == "square" ? Nonlinearity::Square : nl == "product" ? Nonlinearity::Product : Nonlinearity::Cube;
    std::mt19937_64 rng(static_cast<std::uint64_t>(p.integer("seed")));
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double q = 2.0 * std::numbers::pi / L;
    CsvTable t{"prop21.csv", {"trial", "defect"}, {}};
    double worst = 0.0;
    for (int trial = 0; trial < p.integer("trials"); ++trial) {
        HField h(g);
        for (int comp = 0; comp < 2; ++comp) {
            double a[4], ph[4];
            for (int m = 0; m < 4; ++m) {
                a[m] = U(rng);
                ph[m] = std::numbers::pi * U(rng);
            }
            for (std::size_t c = 0; c < g.ncols(); ++c) {
                const auto [x, y] = g.column_xy(c);
                for (int k = 0; k < g.nzp(); ++k) {
                    const double z = g.z(k);
                    h[comp][c * g.nzp() + k] = a[0] + a[1] * std::cos(q * x + ph[1]) + a[2] * std::sin(q * y + ph[2]) +
                                               a[3] * std::cos(std::numbers::pi * z + ph[3]);
                }
            }
        }
        const double d = prop21_check(h, f, Psi, ext, p.num("sigma"));
        worst = std::max(worst, d);
        t.rows.push_back({static_cast<double>(trial), d});
    }
    r.tables.push_back(t);
    if (t.rows.empty()) {
        r.skipped = true;
        return;
    }
    value(r, "max_defect", worst);
    rule(r, "identity_defect", worst <= p.num("tol"), le(worst, p.num("tol")));
}

void write_csv(const CsvTable& t, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt_csv(row[i]);
        os << '\n';
    }
    if (!os) throw Error("write failed: " + path);
}

} // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"commutator-sweep", "pressure-solve", "energy-budget",
                                                   "boundary-sweep",   "corner-norms",   "viscosity-sweep",
                                                   "holder-estimate",  "prop21-check"};
    return names;
}

std::map<std::string, std::string> default_parameters(const std::string& scenario) {
    std::map<std::string, std::string> m;
    for (const auto& k : schema(scenario)) m[k.name] = k.value;
    return m;
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig c;
    std::istringstream is(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(is, line)) {
        ++lineNo;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineNo) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineNo) + ": empty key");
        if (key == "scenario")
            c.scenario = val;
        else
            c.params[key] = val;
    }
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

void apply_override(ScenarioConfig& c, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string key = trim(assignment.substr(0, eq)), val = trim(assignment.substr(eq + 1));
    if (key.empty()) throw ConfigError("override '" + assignment + "': empty key");
    if (key == "scenario")
        c.scenario = val;
    else
        c.params[key] = val;
}

ScenarioConfig resolve(const ScenarioConfig& c) {
    if (c.scenario.empty()) throw ConfigError("no scenario given");
    const auto keys = schema(c.scenario);
    ScenarioConfig out;
    out.scenario = c.scenario;
    for (const auto& [k, v] : c.params) {
        if (std::none_of(keys.begin(), keys.end(), [&](const Key& s) { return s.name == k; }))
            throw ConfigError("unknown parameter '" + k + "' for scenario " + c.scenario);
    }
    for (const auto& k : keys) {
        const auto it = c.params.find(k.name);
        const std::string v = it == c.params.end() ? k.value : it->second;
        check_value(k, v);
        out.params[k.name] = v;
    }
    return out;
}

bool ScenarioResult::passed() const {
    return std::all_of(rules.begin(), rules.end(), [](const RuleResult& r) { return r.pass; });
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
    ScenarioResult r;
    r.config = resolve(config);
    const Params p{r.config.params};
    const std::string& s = r.config.scenario;
    if (s == "commutator-sweep")
        commutator_sweep_scenario(p, r);
    else if (s == "pressure-solve")
        pressure_scenario(p, r);
    else if (s == "energy-budget")
        energy_budget_scenario(p, r);
    else if (s == "boundary-sweep")
        boundary_scenario(p, r);
    else if (s == "corner-norms")
        corner_scenario(p, r);
    else if (s == "viscosity-sweep")
        viscosity_scenario(p, r);
    else if (s == "holder-estimate")
        holder_scenario(p, r);
    else
        prop21_scenario(p, r);
    return r;
}

void emit_report(const ScenarioResult& r, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
    for (const auto& t : r.tables) write_csv(t, dir + "/" + t.name);

    const std::string verdict = r.skipped ? "SKIPPED" : r.passed() ? "PASS" : "FAIL";
    {
        const std::string path = dir + "/report.txt";
        std::ofstream os(path, std::ios::binary);
        if (!os) throw Error("cannot open " + path + " for writing");
        os << "scenario: " << r.config.scenario << "\n\nformulas exercised:\n";
        for (const auto& f : r.formulas) os << "  " << f << '\n';
        os << "\nparameters:\n";
        for (const auto& [k, v] : r.config.params) os << "  " << k << " = " << v << '\n';
        os << "\nresults:\n";
        for (const auto& [k, v] : r.values) os << "  " << k << " = " << v << '\n';
        os << "\nrules:\n";
        for (const auto& x : r.rules) os << "  " << (x.pass ? "PASS " : "FAIL ") << x.name << ": " << x.detail << '\n';
        os << "\nverdict: " << verdict << '\n';
        if (!os) throw Error("write failed: " + path);
    }
    {
        const std::string path = dir + "/summary.kv";
        std::ofstream os(path, std::ios::binary);
        if (!os) throw Error("cannot open " + path + " for writing");
        os << "scenario=" << r.config.scenario << '\n';
        os << "status=" << (r.skipped ? "skipped" : r.passed() ? "pass" : "fail") << '\n';
        for (const auto& [k, v] : r.values) os << k << '=' << v << '\n';
        for (const auto& x : r.rules) os << "rule." << x.name << '=' << (x.pass ? "pass" : "fail") << '\n';
        for (const auto& t : r.tables) os << "file=" << t.name << '\n';
        if (!os) throw Error("write failed: " + path);
    }
}

int run_and_emit(const ScenarioConfig& c, std::string* message) {
    const auto say = [&](const std::string& m) {
        if (message) *message = m;
    };
    try {
        const ScenarioResult r = run_scenario(c);
        emit_report(r, r.config.params.at("out"));
        say(r.skipped ? "skipped" : r.passed() ? "pass" : "fail");
        return r.exit_code();
    } catch (const NumericalGuard& e) {
        say(e.what());
        return 3;
    } catch (const Error& e) {
        say(e.what());
        return 2;
    }
}

} // namespace pelab
