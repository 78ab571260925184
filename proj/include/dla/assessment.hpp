#pragma once

// Usage-scenario assessment over a verified license, and the JSON / Markdown
// report emitters.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dla/catalog.hpp"
#include "dla/json_codec.hpp"
#include "dla/model.hpp"

namespace dla {

// DD -> {Distribute}, RPEAI -> {CommercializeModel}, CAI -> {CommercializeOutput}.
std::vector<UsageScenario> default_scenarios();

// Throws SchemaViolation for an empty id or empty required_rights.
UsageScenario make_scenario(std::string id, std::vector<std::string> required_rights,
                            std::string description = "");

// Reads {"scenarios": [...]} and rejects empty or duplicate scenarios.
std::vector<UsageScenario> scenarios_from_json(const Json& j, ParseContext& ctx);
Json scenarios_to_json(std::span<const UsageScenario> scenarios);

// Throws UnknownRight when the scenario needs a right outside the verified
// license's right space.
AssessmentRow assess(const VerifiedLicense& verified, const UsageScenario& scenario);

// One row per scenario in input order. Throws DuplicateScenario.
AssessmentTable assess_all(const VerifiedLicense& verified, std::span<const UsageScenario> scenarios,
                           std::string dataset_name = "");

// "Yes(C+D)", "Yes" or "No".
std::string cell_text(const AssessmentRow& row);

// Everything the CLI reports for one dataset.
struct DatasetReport {
  AssessmentTable table;
  VerifiedLicense verified;
  RightsVector own;
  std::vector<std::pair<SubjectId, TemplateRef>> templates;
};

Json to_json(const DatasetReport& report);
Json reports_to_json(std::span<const DatasetReport> reports);
std::string render_markdown(std::span<const DatasetReport> reports);

}  // namespace dla
