#include "dla/engine.hpp"

#include <algorithm>
#include <set>

#include "dla/digest.hpp"
#include "dla/error.hpp"
#include "dla/json_codec.hpp"

namespace dla {

std::string Policy::flags() const { return unknown_denies ? "unknown-denies" : "default"; }

std::string interpretation_digest(const std::optional<RightsVector>& vector) {
  if (!vector) return "unavailable";
  return sha256_hex(canonical(to_json(*vector)));
}

Audit make_audit(const LineageGraph& graph, const InterpretationMap& interpretations,
                 const Policy& policy) {
  Audit audit;
  audit.engine_version = std::string(kEngineVersion);
  audit.unknown_denies = policy.unknown_denies;
  audit.lineage_digest = lineage_digest(graph);
  for (const auto& [id, _] : graph.nodes()) {
    auto it = interpretations.find(id);
    if (it != interpretations.end()) audit.input_digests[id] = interpretation_digest(it->second);
  }
  return audit;
}

VerifiedLicense verify(const LineageGraph& graph, const InterpretationMap& interpretations,
                       const Policy& policy) {
  const SubjectId& root_id = graph.root_id();
  auto root_it = interpretations.find(root_id);
  if (root_it == interpretations.end() || !root_it->second) {
    throw Error(ErrorCode::MissingRootInterpretation,
                "root '" + root_id + "' has no interpreted license");
  }
  const RightsVector& root = *root_it->second;

  // Root first, then the remaining nodes in subject-id order.
  std::vector<std::pair<SubjectId, const std::optional<RightsVector>*>> order;
  order.emplace_back(root_id, &root_it->second);
  for (const auto& [id, _] : graph.nodes()) {
    if (id == root_id) continue;
    auto it = interpretations.find(id);
    if (it == interpretations.end()) {
      throw Error(ErrorCode::UninterpretedNode,
                  "'" + id + "' is neither interpreted nor marked unavailable");
    }
    order.emplace_back(id, &it->second);
  }

  VerifiedLicense out;
  out.root_id = root_id;

  std::set<std::string> custom_names;
  for (const auto& [id, vec] : order) {
    if (*vec) {
      for (const auto& [name, _] : (*vec)->rights.custom) custom_names.insert(name);
    } else {
      out.residual_risk_flags.push_back(id);
    }
  }
  std::sort(out.residual_risk_flags.begin(), out.residual_risk_flags.end());

  std::vector<std::string> names;
  for (Right r : kStandaloneRights) names.emplace_back(to_string(r));
  for (Right r : kModelRights) names.emplace_back(to_string(r));
  names.insert(names.end(), custom_names.begin(), custom_names.end());

  for (const auto& name : names) {
    std::vector<SubjectId> restrictors;
    std::vector<Obligation> obligations;
    for (const auto& [id, vec] : order) {
      if (!*vec) {
        if (policy.unknown_denies) restrictors.push_back(id);
        continue;
      }
      const RightEntry* entry = (*vec)->rights.find(name);
      if (!entry || entry->grant != Grant::Granted) {
        restrictors.push_back(id);
      } else {
        merge_obligations(obligations, entry->obligations);
      }
    }

    const Grant own = root.rights.grant_of(name);
    RightEntry verified;
    if (restrictors.empty()) {
      verified.grant = Grant::Granted;
      verified.obligations = std::move(obligations);
    } else {
      // A right the root itself did not grant keeps the root's reading.
      verified.grant = own == Grant::Granted ? Grant::Denied : own;
      if (own != Grant::Granted) {
        if (const RightEntry* root_entry = root.rights.find(name)) verified.obligations = root_entry->obligations;
      }
      out.restrictors[name] = std::move(restrictors);
    }
    if (verified.grant != own) out.changed.push_back(name);
    out.rights.set(name, std::move(verified));
  }

  out.audit = make_audit(graph, interpretations, policy);
  return out;
}

std::vector<std::string> diff_rights(const RightsVector& own, const VerifiedLicense& verified) {
  for (const auto& name : own.rights.names()) {
    if (!verified.rights.find(name)) {
      throw Error(ErrorCode::RightSpaceMismatch, "right '" + name + "' is absent from the verified license");
    }
  }
  std::vector<std::string> changed;
  for (const auto& name : verified.rights.names()) {
    const bool fixed = is_fixed_right(name);
    if (fixed && !own.rights.find(name)) {
      throw Error(ErrorCode::RightSpaceMismatch, "right '" + name + "' is absent from the own vector");
    }
    if (own.rights.grant_of(name) != verified.rights.grant_of(name)) changed.push_back(name);
  }
  return changed;
}

}  // namespace dla
