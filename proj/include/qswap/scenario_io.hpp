#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qswap/scenario.hpp"

namespace qswap {

// Scenario file or report deserialization failure; `where` addresses the
// offending field (JSON-pointer style) or parse position.
struct ParseError : SimError {
    ParseError(const std::string& where, const std::string& what)
        : SimError(where + ": " + what), where(where) {}
    std::string where;
};

struct ScenarioRequest {
    Scenario scenario;
    std::optional<SamplingRequest> sampling;
};

// Parses a scenario description. `origin` names the source (file name or
// preset name) for diagnostics. Complex numbers are [re, im] pairs, matrices
// row-major lists of rows; named matrix presets: identity, shift, fourier,
// bell:phi+/phi-/psi+/psi-, haar:<seed>.
ScenarioRequest parse_scenario_text(const std::string& text, const std::string& origin);
ScenarioRequest load_scenario_file(const std::string& path);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

// Human-readable rendering; prints exactly the numbers the JSON carries.
std::string render_report(const RunReport& report);

// Oracle-run summary keyed by outcome, for file-to-file comparisons.
struct BranchSummary {
    int d = 2;
    std::map<OutcomeKey, double> probs;
    std::map<OutcomeKey, std::optional<Ket>> locals;
};
BranchSummary summarize_run(const Scenario& sc);

struct Preset {
    std::string name;
    int setup;  // 1..7, one per bundled experimental arrangement
    std::string description;
    std::string text;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

}  // namespace qswap
