/// @file test_cli.cpp
/// @brief Scenario configuration, report emission and the command-line runner.

#include <doctest.h>

#include "pelab/error.hpp"
#include "pelab/scenario.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pelab;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("pelab_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

int run_cli(const std::string& args) {
    const int rc = std::system((std::string(PELAB_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
} // namespace

TEST_CASE("config text parsing") {
    const ScenarioConfig c = parse_config("# comment\nscenario = pressure-solve\n  nx = 32 # trailing\n\nfield=zero\n");
    CHECK(c.scenario == "pressure-solve");
    CHECK(c.params.at("nx") == "32");
    CHECK(c.params.at("field") == "zero");
    CHECK_THROWS_AS(parse_config("nx 32\n"), ConfigError);
    ScenarioConfig d = c;
    apply_override(d, "nx=16");
    CHECK(d.params.at("nx") == "16");
    CHECK_THROWS_AS(apply_override(d, "nx"), ConfigError);
}

TEST_CASE("every scenario has a complete default set") {
    CHECK(scenario_names().size() == 8);
    for (const auto& s : scenario_names()) {
        const auto m = default_parameters(s);
        CHECK(m.count("out") == 1);
        CHECK(m.count("seed") == 1);
        ScenarioConfig c;
        c.scenario = s;
        CHECK(resolve(c).params == m);
    }
    CHECK_THROWS_AS(default_parameters("no-such-scenario"), ConfigError);
}

TEST_CASE("validation names the offending key") {
    ScenarioConfig c;
    c.scenario = "pressure-solve";
    c.params["nxx"] = "3";
    try {
        resolve(c);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("nxx") != std::string::npos);
    }
    c.params.clear();
    c.params["nx"] = "abc";
    CHECK_THROWS_WITH_AS(resolve(c), doctest::Contains("nx"), ConfigError);
    c.params["nx"] = "1.5";
    CHECK_THROWS_AS(resolve(c), ConfigError);
    c.params["nx"] = "32";
    c.params["field"] = "vortex";
    CHECK_THROWS_WITH_AS(resolve(c), doctest::Contains("field"), ConfigError);
    c.params.erase("field");
    CHECK_NOTHROW(resolve(c));
    ScenarioConfig e;
    e.scenario = "corner-norms";
    e.params["etas"] = "1/16,x";
    CHECK_THROWS_WITH_AS(resolve(e), doctest::Contains("etas"), ConfigError);
}

TEST_CASE("pressure-solve scenario passes and writes its artifacts") {
    const fs::path out = scratch("pressure");
    ScenarioConfig c;
    c.scenario = "pressure-solve";
    c.params["out"] = out.string();
    c.params["nx"] = "32";
    std::string msg;
    CHECK(run_and_emit(c, &msg) == 0);
    CHECK(msg == "pass");
    CHECK(fs::exists(out / "pressure.csv"));
    const std::string report = slurp(out / "report.txt");
    CHECK(report.find("closed_form") != std::string::npos);
    CHECK(report.find("verdict: PASS") != std::string::npos);
    const std::string summary = slurp(out / "summary.kv");
    CHECK(summary.find("status=pass") != std::string::npos);
    CHECK(slurp(out / "pressure.csv").rfind("x,y,p,p_exact\n", 0) == 0);
    fs::remove_all(out);
}

TEST_CASE("acceptance failure maps to exit 1") {
    const fs::path out = scratch("fail");
    ScenarioConfig c;
    c.scenario = "pressure-solve";
    c.params["out"] = out.string();
    c.params["nx"] = "16";
    c.params["tol"] = "0";
    CHECK(run_and_emit(c) == 1);
    CHECK(slurp(out / "summary.kv").find("rule.closed_form=fail") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("errors map to exit codes") {
    ScenarioConfig c;
    c.scenario = "no-such-scenario";
    CHECK(run_and_emit(c) == 2);
    ScenarioConfig v;
    v.scenario = "viscosity-sweep";
    v.params["out"] = scratch("guard").string();
    v.params["dt"] = "1";
    CHECK(run_and_emit(v) == 2);
}

TEST_CASE("empty sweep gives a header-only CSV and a skipped summary") {
    const fs::path out = scratch("empty");
    ScenarioConfig c;
    c.scenario = "viscosity-sweep";
    c.params["out"] = out.string();
    c.params["nus"] = "";
    CHECK(run_and_emit(c) == 0);
    CHECK(slurp(out / "sweep.csv") == "nu,totalDissipation,finalEnergy,initialEnergy,maxDefect\n");
    CHECK(slurp(out / "summary.kv").find("status=skipped") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("viscosity sweep summary carries the monotonicity verdict") {
    const fs::path out = scratch("visc");
    ScenarioConfig c;
    c.scenario = "viscosity-sweep";
    c.params["out"] = out.string();
    c.params["tEnd"] = "0.25";
    c.params["nus"] = "0.8,0.4,0.2,0.1";
    CHECK(run_and_emit(c) == 0);
    const std::string s = slurp(out / "summary.kv");
    CHECK(s.find("monotone=true") != std::string::npos);
    CHECK(s.find("rule.monotone_dissipation=pass") != std::string::npos);
    fs::remove_all(out);
}

TEST_CASE("reruns are byte-identical") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    for (const auto& dir : {a, b}) {
        ScenarioConfig c;
        c.scenario = "prop21-check";
        c.params["out"] = dir.string();
        c.params["trials"] = "2";
        c.params["seed"] = "7";
        REQUIRE(run_and_emit(c) == 0);
    }
    CHECK(slurp(a / "prop21.csv") == slurp(b / "prop21.csv"));
    CHECK(slurp(a / "summary.kv") == slurp(b / "summary.kv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("command-line binary") {
    const fs::path out = scratch("bin");
    CHECK(run_cli("--list") == 0);
    CHECK(run_cli("no-such-scenario") == 2);
    CHECK(run_cli("pressure-solve --set bogus=1") == 2);
    CHECK(run_cli("pressure-solve --set nx=16 --out " + out.string()) == 0);
    CHECK(fs::exists(out / "report.txt"));
    const fs::path cfg = out / "run.cfg";
    std::ofstream(cfg) << "scenario = pressure-solve\nfield = cos-y\nnx = 32\n";
    CHECK(run_cli("--config " + cfg.string() + " --out " + (out / "c").string()) == 0);
    CHECK(fs::exists(out / "c" / "pressure.csv"));
    fs::remove_all(out);
}
