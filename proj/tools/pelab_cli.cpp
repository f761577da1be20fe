#include "pelab/error.hpp"
#include "pelab/scenario.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"pelab_cli: energy-conservation lab scenarios"};
    std::string scenario, configPath, out;
    std::vector<std::string> sets;
    bool list = false, defaults = false;
    app.add_option("scenario", scenario, "scenario name (see --list)");
    app.add_option("-c,--config", configPath, "flat key = value config file");
    app.add_option("-s,--set", sets, "parameter override key=value (repeatable)");
    app.add_option("-o,--out", out, "output directory (same as --set out=DIR)");
    app.add_flag("--list", list, "list scenarios and exit");
    app.add_flag("--defaults", defaults, "print the default parameters of the scenario and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (list) {
        for (const auto& s : pelab::scenario_names()) std::cout << s << '\n';
        return 0;
    }
    try {
        pelab::ScenarioConfig cfg;
        if (!configPath.empty()) cfg = pelab::load_config(configPath);
        if (!scenario.empty()) cfg.scenario = scenario;
        for (const auto& s : sets) pelab::apply_override(cfg, s);
        if (!out.empty()) cfg.params["out"] = out;
        if (cfg.scenario.empty()) throw pelab::ConfigError("no scenario given");
        if (defaults) {
            for (const auto& [k, v] : pelab::default_parameters(cfg.scenario)) std::cout << k << " = " << v << '\n';
            return 0;
        }
        pelab::resolve(cfg);
        std::string msg;
        const int rc = pelab::run_and_emit(cfg, &msg);
        (rc == 0 ? std::cout : std::cerr) << cfg.scenario << ": " << msg << '\n';
        return rc;
    } catch (const pelab::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        std::cerr << "scenarios:";
        for (const auto& s : pelab::scenario_names()) std::cerr << ' ' << s;
        std::cerr << '\n';
        return 2;
    } catch (const pelab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
