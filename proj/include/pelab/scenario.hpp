#pragma once

#include <map>
#include <string>
#include <vector>

namespace pelab {

/// Scenario name plus a flat parameter map. Values are kept as text and parsed per scenario.
struct ScenarioConfig {
    std::string scenario;
    std::map<std::string, std::string> params;
};

const std::vector<std::string>& scenario_names();

/// Complete default parameter set of a scenario; throws ConfigError for an unknown name.
std::map<std::string, std::string> default_parameters(const std::string& scenario);

/// Parses `key = value` lines ('#' starts a comment). The key `scenario` selects the scenario.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Applies one `key=value` override.
void apply_override(ScenarioConfig& c, const std::string& assignment);

/// Fills in defaults and rejects unknown keys and malformed values, naming the offending key.
ScenarioConfig resolve(const ScenarioConfig& c);

struct CsvTable {
    std::string name;  ///< file name inside the output directory
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct RuleResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioResult {
    ScenarioConfig config;  ///< resolved
    bool skipped = false;
    std::vector<std::string> formulas;  ///< report header lines naming the formulas exercised
    std::vector<std::pair<std::string, std::string>> values;  ///< measured quantities for the report
    std::vector<RuleResult> rules;
    std::vector<CsvTable> tables;

    bool passed() const;
    int exit_code() const { return passed() ? 0 : 1; }
};

/// Runs the scenario without touching the file system.
ScenarioResult run_scenario(const ScenarioConfig& c);

/// Writes report.txt, summary.kv and every table to `dir` (created if missing).
void emit_report(const ScenarioResult& r, const std::string& dir);

/// Resolve, run and emit to the `out` parameter; maps failures to exit codes
/// (0 pass, 1 acceptance failure, 2 usage/config error, 3 numerical guard).
int run_and_emit(const ScenarioConfig& c, std::string* message = nullptr);

} // namespace pelab
