#pragma once

// Restrictive-wins resolution of a root dataset's rights against the
// licenses of every data source in its lineage.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dla/lineage.hpp"
#include "dla/model.hpp"

namespace dla {

inline constexpr std::string_view kEngineVersion = "dla-engine/1.0";

// subject id -> interpreted vector, or nullopt when the license content was
// unavailable.
using InterpretationMap = std::map<SubjectId, std::optional<RightsVector>>;

struct Policy {
  // Treat unavailable licenses as denying every right.
  bool unknown_denies = false;

  // Stable textual form used in cache keys.
  std::string flags() const;
};

// A right is Granted iff the root and every interpreted node grant it
// (Unspecified counts as not granting). Unavailable nodes only raise residual
// risk flags unless the policy says they deny. Denied rights list every
// non-granting node as a restrictor; granted rights carry the id-union of all
// interpreted nodes' obligations, root first, then by subject id.
//
// Throws MissingRootInterpretation or UninterpretedNode.
VerifiedLicense verify(const LineageGraph& graph, const InterpretationMap& interpretations,
                       const Policy& policy = {});

// Audit record of the inputs verify() would consume; used to detect stale
// cache entries without running the engine.
Audit make_audit(const LineageGraph& graph, const InterpretationMap& interpretations,
                 const Policy& policy);

std::string interpretation_digest(const std::optional<RightsVector>& vector);

// Rights whose grant differs between the root's own vector and the verified
// license, in canonical order. Obligation differences are ignored.
// Throws RightSpaceMismatch.
std::vector<std::string> diff_rights(const RightsVector& own, const VerifiedLicense& verified);

}  // namespace dla
