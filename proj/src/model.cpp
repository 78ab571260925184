#include "dla/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "dla/error.hpp"

namespace dla {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::UnreachableNode: return "UnreachableNode";
    case ErrorCode::DuplicateSubject: return "DuplicateSubject";
    case ErrorCode::MissingOriginYear: return "MissingOriginYear";
    case ErrorCode::NoDatasetAncestor: return "NoDatasetAncestor";
    case ErrorCode::AmbiguousRange: return "AmbiguousRange";
    case ErrorCode::UnknownLicense: return "UnknownLicense";
    case ErrorCode::DuplicateRight: return "DuplicateRight";
    case ErrorCode::MissingRootInterpretation: return "MissingRootInterpretation";
    case ErrorCode::UninterpretedNode: return "UninterpretedNode";
    case ErrorCode::RightSpaceMismatch: return "RightSpaceMismatch";
    case ErrorCode::UnknownRight: return "UnknownRight";
    case ErrorCode::DuplicateScenario: return "DuplicateScenario";
    case ErrorCode::StoreCorrupt: return "StoreCorrupt";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::optional<std::size_t> digest_hex_length(std::string_view algorithm) {
  std::string upper;
  for (char c : algorithm) {
    if (c != '-' && c != '_') upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (upper == "MD5") return 32;
  if (upper == "SHA1") return 40;
  if (upper == "SHA224") return 56;
  if (upper == "SHA256") return 64;
  if (upper == "SHA384") return 96;
  if (upper == "SHA512") return 128;
  return std::nullopt;
}

void merge_obligations(std::vector<Obligation>& into, const std::vector<Obligation>& extra) {
  for (const auto& ob : extra) {
    if (std::find(into.begin(), into.end(), ob) == into.end()) into.push_back(ob);
  }
}

namespace {

bool same_obligations(const std::vector<Obligation>& a, const std::vector<Obligation>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Obligation& x, const Obligation& y) { return x.same_value(y); });
}

template <typename Map>
bool same_entries(const Map& a, const Map& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) {
    return x.first == y.first && x.second.same_value(y.second);
  });
}

constexpr std::string_view kRightNames[] = {
    "Access",      "Tagging",     "Distribute",          "Rerepresent",
    "Benchmark",   "Research",    "Publish",             "InternalUse",
    "CommercializeOutput", "CommercializeModel", "ModelReverseEngineer",
};

}  // namespace

bool RightEntry::same_value(const RightEntry& other) const {
  return grant == other.grant && same_obligations(obligations, other.obligations);
}

RightGroup group_of(Right right) noexcept {
  return static_cast<int>(right) <= static_cast<int>(Right::Rerepresent) ? RightGroup::standalone
                                                                          : RightGroup::model;
}

std::string_view to_string(Right right) noexcept { return kRightNames[static_cast<int>(right)]; }

std::optional<Right> fixed_right_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < std::size(kRightNames); ++i) {
    if (kRightNames[i] == name) return static_cast<Right>(i);
  }
  return std::nullopt;
}

bool is_fixed_right(std::string_view name) noexcept { return fixed_right_from_string(name).has_value(); }

const RightEntry* RightTable::find(std::string_view name) const {
  return const_cast<RightTable*>(this)->find(name);
}

RightEntry* RightTable::find(std::string_view name) {
  if (auto fixed = fixed_right_from_string(name)) {
    // A fixed right filed under the wrong group is still found, so that
    // validation can report it rather than it silently reading Unspecified.
    for (auto* group : {&standalone, &model}) {
      if (auto it = group->find(*fixed); it != group->end()) return &it->second;
    }
    return nullptr;
  }
  auto it = custom.find(std::string(name));
  return it == custom.end() ? nullptr : &it->second;
}

Grant RightTable::grant_of(std::string_view name) const {
  const RightEntry* entry = find(name);
  return entry ? entry->grant : Grant::Unspecified;
}

void RightTable::set(std::string_view name, RightEntry entry) {
  if (auto fixed = fixed_right_from_string(name)) {
    auto& group = group_of(*fixed) == RightGroup::standalone ? standalone : model;
    group[*fixed] = std::move(entry);
  } else {
    custom[std::string(name)] = std::move(entry);
  }
}

std::vector<std::string> RightTable::names() const {
  std::vector<std::string> out;
  for (const auto& [right, _] : standalone) out.emplace_back(to_string(right));
  for (const auto& [right, _] : model) out.emplace_back(to_string(right));
  for (const auto& [name, _] : custom) out.push_back(name);
  return out;
}

bool RightTable::same_value(const RightTable& other) const {
  return same_entries(standalone, other.standalone) && same_entries(model, other.model) &&
         same_entries(custom, other.custom);
}

RightsVector all_granted(LicenseMetadata metadata, std::vector<Obligation> obligations) {
  RightsVector v;
  v.metadata = std::move(metadata);
  for (Right r : kStandaloneRights) v.rights.standalone[r] = {Grant::Granted, obligations};
  for (Right r : kModelRights) v.rights.model[r] = {Grant::Granted, obligations};
  return v;
}

const std::vector<SubjectId>& VerifiedLicense::restrictors_of(std::string_view right) const {
  static const std::vector<SubjectId> empty;
  auto it = restrictors.find(std::string(right));
  return it == restrictors.end() ? empty : it->second;
}

bool VerifiedLicense::same_value(const VerifiedLicense& other) const {
  return root_id == other.root_id && rights.same_value(other.rights) &&
         restrictors == other.restrictors && changed == other.changed &&
         residual_risk_flags == other.residual_risk_flags && audit == other.audit;
}

bool AssessmentTable::operator==(const AssessmentTable& other) const {
  return dataset_id == other.dataset_id && dataset_name == other.dataset_name &&
         rows == other.rows && same_obligations(legend, other.legend);
}

// ---------------------------------------------------------------------------

ValidationReport validate_provenance(const ProvenanceRecord& record) {
  ValidationReport report;
  if (record.subject_id.empty()) report.push_back({"subject_id", "must be nonempty"});
  if (record.subject_kind == SubjectKind::dataset && !record.origin_year) {
    report.push_back({"origin_year", "required when subject_kind is dataset"});
  }
  if (record.license_found_via == LicenseFoundVia::none_found && record.license_content) {
    report.push_back({"license_content", "must be absent when license_found_via is none_found"});
  }
  if (record.digest) {
    const auto& d = *record.digest;
    auto expected = digest_hex_length(d.algorithm);
    if (!expected) {
      report.push_back({"digest.algorithm", "unknown digest algorithm '" + d.algorithm + "'"});
    } else if (d.hex.size() != *expected) {
      std::ostringstream msg;
      msg << "digest length " << d.hex.size() << " does not match " << d.algorithm << " length "
          << *expected;
      report.push_back({"digest.hex", msg.str()});
    }
    if (!std::all_of(d.hex.begin(), d.hex.end(),
                     [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); })) {
      report.push_back({"digest.hex", "must contain only hexadecimal digits"});
    }
  }
  return report;
}

namespace {

void check_group(const std::map<Right, RightEntry>& group, RightGroup expected,
                 std::string_view field, ValidationReport& report) {
  const auto& required = expected == RightGroup::standalone
                             ? std::vector<Right>(std::begin(kStandaloneRights), std::end(kStandaloneRights))
                             : std::vector<Right>(std::begin(kModelRights), std::end(kModelRights));
  for (Right r : required) {
    if (!group.contains(r)) {
      report.push_back({std::string(field) + "." + std::string(to_string(r)), "missing right"});
    }
  }
  for (const auto& [r, _] : group) {
    if (group_of(r) != expected) {
      report.push_back({std::string(field) + "." + std::string(to_string(r)),
                        "right belongs to the other right group"});
    }
  }
}

void check_obligations(const std::string& field, const RightEntry& entry, ValidationReport& report) {
  std::set<std::string> seen;
  for (const auto& ob : entry.obligations) {
    if (ob.id.empty()) report.push_back({field + ".obligations", "obligation id must be nonempty"});
    if (!seen.insert(ob.id).second) {
      report.push_back({field + ".obligations", "duplicate obligation id '" + ob.id + "'"});
    }
  }
}

}  // namespace

ValidationReport validate_rights_vector(const RightsVector& vector) {
  ValidationReport report;
  check_group(vector.rights.standalone, RightGroup::standalone, "standalone_rights", report);
  check_group(vector.rights.model, RightGroup::model, "model_rights", report);
  for (const auto& [name, entry] : vector.rights.custom) {
    if (name.empty()) report.push_back({"custom_rights", "custom right name must be nonempty"});
    if (is_fixed_right(name)) {
      report.push_back({"custom_rights." + name, "custom key collides with a fixed right"});
    }
  }
  for (const auto& [r, entry] : vector.rights.standalone) {
    check_obligations("standalone_rights." + std::string(to_string(r)), entry, report);
  }
  for (const auto& [r, entry] : vector.rights.model) {
    check_obligations("model_rights." + std::string(to_string(r)), entry, report);
  }
  for (const auto& [name, entry] : vector.rights.custom) {
    check_obligations("custom_rights." + name, entry, report);
  }
  return report;
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream out;
  for (const auto& v : report) out << "  " << v.field << ": " << v.rule << "\n";
  return out.str();
}

}  // namespace dla
