#include "dla/assessment.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "dla/error.hpp"

namespace dla {

std::vector<UsageScenario> default_scenarios() {
  return {
      make_scenario("DD", {"Distribute"}, "Commercially distribute the dataset"),
      make_scenario("RPEAI", {"CommercializeModel"},
                    "Release a product with an embedded AI model trained on the dataset"),
      make_scenario("CAI", {"CommercializeOutput"}, "Commercialize the output of the trained model"),
  };
}

UsageScenario make_scenario(std::string id, std::vector<std::string> required_rights,
                            std::string description) {
  if (id.empty()) throw Error(ErrorCode::SchemaViolation, "scenario id must be nonempty");
  if (required_rights.empty()) {
    throw Error(ErrorCode::SchemaViolation, "scenario '" + id + "' requires no rights");
  }
  std::set<std::string> seen;
  for (const auto& r : required_rights) {
    if (!seen.insert(r).second) {
      throw Error(ErrorCode::SchemaViolation, "scenario '" + id + "' lists right '" + r + "' twice");
    }
  }
  return {std::move(id), std::move(required_rights), std::move(description)};
}

std::vector<UsageScenario> scenarios_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "scenarios_document", ctx);
  const Json& list = in.require("scenarios");
  if (!list.is_array()) in.fail("scenarios", "expected an array");
  std::vector<UsageScenario> out;
  std::set<std::string> ids;
  for (const auto& item : list) {
    UsageScenario s = scenario_from_json(item, ctx);
    s = make_scenario(std::move(s.id), std::move(s.required_rights), std::move(s.description));
    if (!ids.insert(s.id).second) throw Error(ErrorCode::DuplicateScenario, s.id);
    out.push_back(std::move(s));
  }
  in.finish();
  return out;
}

Json scenarios_to_json(std::span<const UsageScenario> scenarios) {
  Json list = Json::array();
  for (const auto& s : scenarios) list.push_back(to_json(s));
  return Json{{"scenarios", list}};
}

AssessmentRow assess(const VerifiedLicense& verified, const UsageScenario& scenario) {
  if (scenario.required_rights.empty()) {
    throw Error(ErrorCode::SchemaViolation, "scenario '" + scenario.id + "' requires no rights");
  }
  AssessmentRow row;
  row.scenario_id = scenario.id;
  std::vector<Obligation> obligations;
  for (const auto& right : scenario.required_rights) {
    const RightEntry* entry = verified.rights.find(right);
    if (!entry) {
      throw Error(ErrorCode::UnknownRight,
                  "scenario '" + scenario.id + "' requires unknown right '" + right + "'");
    }
    if (entry->grant == Grant::Granted) {
      merge_obligations(obligations, entry->obligations);
    } else {
      row.blocking_rights.push_back({right, verified.restrictors_of(right)});
    }
  }
  row.permitted = row.blocking_rights.empty();
  if (!row.permitted) return row;

  for (const auto& ob : obligations) row.obligations.push_back(ob.id);
  std::vector<Obligation> others;
  for (const auto& name : verified.rights.names()) {
    if (std::find(scenario.required_rights.begin(), scenario.required_rights.end(), name) !=
        scenario.required_rights.end()) {
      continue;
    }
    const RightEntry* entry = verified.rights.find(name);
    if (entry->grant == Grant::Granted) merge_obligations(others, entry->obligations);
  }
  for (const auto& ob : others) {
    if (std::find(obligations.begin(), obligations.end(), ob) == obligations.end()) {
      row.other_obligations.push_back(ob.id);
    }
  }
  return row;
}

AssessmentTable assess_all(const VerifiedLicense& verified, std::span<const UsageScenario> scenarios,
                           std::string dataset_name) {
  AssessmentTable table;
  table.dataset_id = verified.root_id;
  table.dataset_name = std::move(dataset_name);
  std::set<std::string> ids;
  for (const auto& s : scenarios) {
    if (!ids.insert(s.id).second) throw Error(ErrorCode::DuplicateScenario, s.id);
    table.rows.push_back(assess(verified, s));
  }

  // Legend: every obligation id mentioned by a row, with its wording taken
  // from the first right (canonical order) that carries it.
  std::set<std::string> mentioned;
  for (const auto& row : table.rows) {
    mentioned.insert(row.obligations.begin(), row.obligations.end());
    mentioned.insert(row.other_obligations.begin(), row.other_obligations.end());
  }
  std::map<std::string, Obligation> wording;
  for (const auto& name : verified.rights.names()) {
    for (const auto& ob : verified.rights.find(name)->obligations) wording.try_emplace(ob.id, ob);
  }
  for (const auto& id : mentioned) table.legend.push_back(wording.at(id));
  return table;
}

std::string cell_text(const AssessmentRow& row) {
  if (!row.permitted) return "No";
  if (row.obligations.empty()) return "Yes";
  std::string out = "Yes(";
  for (std::size_t i = 0; i < row.obligations.size(); ++i) {
    if (i) out += "+";
    out += row.obligations[i];
  }
  return out + ")";
}

// ---------------------------------------------------------------------------

Json to_json(const DatasetReport& report) {
  Json templates = Json::object();
  for (const auto& [id, ref] : report.templates) {
    templates[id] = Json{{"license_id", ref.license_id}, {"version", ref.version}, {"digest", ref.digest}};
  }
  return Json{{"assessment", to_json(report.table)},
              {"verified_license", to_json(report.verified)},
              {"templates", templates}};
}

Json reports_to_json(std::span<const DatasetReport> reports) {
  Json list = Json::array();
  for (const auto& r : reports) list.push_back(to_json(r));
  return Json{{"reports", list}};
}

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string display_name(const DatasetReport& r) {
  return r.table.dataset_name.empty() ? r.table.dataset_id : r.table.dataset_name;
}

}  // namespace

std::string render_markdown(std::span<const DatasetReport> reports) {
  std::ostringstream out;
  out << "# Dataset license compliance assessment\n\n";

  // Scenario columns in first-seen order across all reports.
  std::vector<std::string> columns;
  for (const auto& r : reports) {
    for (const auto& row : r.table.rows) {
      if (std::find(columns.begin(), columns.end(), row.scenario_id) == columns.end()) {
        columns.push_back(row.scenario_id);
      }
    }
  }
  out << "| Dataset |";
  for (const auto& c : columns) out << " " << c << " |";
  out << "\n| --- |";
  for (std::size_t i = 0; i < columns.size(); ++i) out << " --- |";
  out << "\n";
  std::map<std::string, Obligation> legend;
  for (const auto& r : reports) {
    out << "| " << display_name(r) << " |";
    for (const auto& c : columns) {
      auto it = std::find_if(r.table.rows.begin(), r.table.rows.end(),
                             [&](const AssessmentRow& row) { return row.scenario_id == c; });
      out << " " << (it == r.table.rows.end() ? "-" : cell_text(*it)) << " |";
    }
    out << "\n";
    for (const auto& ob : r.table.legend) legend.try_emplace(ob.id, ob);
  }
  if (!legend.empty()) {
    out << "\nObligations:\n";
    for (const auto& [id, ob] : legend) out << "- " << id << ": " << ob.text << "\n";
  }

  for (const auto& r : reports) {
    out << "\n## " << display_name(r) << "\n\n";
    if (r.verified.changed.empty()) {
      out << "No rights changed after license compatibility analysis.\n";
    } else {
      out << "Changed rights after license compatibility analysis:\n\n"
          << "| Right | Own license | Verified | Restricted by |\n| --- | --- | --- | --- |\n";
      for (const auto& name : r.verified.changed) {
        out << "| " << name << " | " << to_string(r.own.rights.grant_of(name)) << " | "
            << to_string(r.verified.rights.grant_of(name)) << " | "
            << join(r.verified.restrictors_of(name), ", ") << " |\n";
      }
    }
    for (const auto& row : r.table.rows) {
      if (row.permitted) {
        if (!row.other_obligations.empty()) {
          out << "\nNote (" << row.scenario_id << "): other granted rights carry obligations "
              << join(row.other_obligations, ", ") << ".\n";
        }
        continue;
      }
      out << "\n" << row.scenario_id << " blocked by:\n";
      for (const auto& b : row.blocking_rights) {
        out << "- " << b.right << " (" << to_string(r.verified.rights.grant_of(b.right));
        if (!b.restrictors.empty()) out << "; restricted by " << join(b.restrictors, ", ");
        out << ")\n";
      }
    }
    if (!r.verified.residual_risk_flags.empty()) {
      out << "\nResidual risk, license content unavailable: "
          << join(r.verified.residual_risk_flags, ", ") << "\n";
    }
    if (!r.templates.empty()) {
      out << "\nTemplates:\n";
      for (const auto& [id, ref] : r.templates) {
        out << "- " << id << ": " << ref.license_id << " " << ref.version << " (sha256 "
            << ref.digest.substr(0, 12) << ")\n";
      }
    }
  }
  return out.str();
}

}  // namespace dla
