#pragma once

// Domain types for dataset license analysis: provenance records, license
// captures, Enhanced MDL rights vectors, verified licenses, usage scenarios
// and assessment tables. All types are plain values.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dla {

using SubjectId = std::string;

enum class SubjectKind { dataset, website, search_engine };
enum class TriState { yes, no, unknown };
enum class LicenseFoundVia { official_website, packaged_file, owner_contact, none_found };

struct Digest {
  std::string algorithm;
  std::string hex;

  bool operator==(const Digest&) const = default;
};

// Expected hex length for a digest algorithm name (case-insensitive), or
// nullopt if the algorithm is not recognised.
std::optional<std::size_t> digest_hex_length(std::string_view algorithm);

struct ProvenanceRecord {
  SubjectId subject_id;
  SubjectKind subject_kind = SubjectKind::dataset;
  std::string dataset_name;
  std::optional<std::string> dataset_version;
  std::optional<int> origin_year;
  std::string origin_url;
  std::string description;
  std::string collection_process;
  std::optional<std::string> downloaded_outlet;
  TriState outlet_licensed = TriState::unknown;
  TriState publicly_available = TriState::unknown;
  std::string notes;
  LicenseFoundVia license_found_via = LicenseFoundVia::none_found;
  std::optional<std::string> license_location;
  std::optional<std::string> license_content;
  std::optional<Digest> digest;
  std::optional<std::uint64_t> size_bytes;
  std::optional<std::string> archive_format;

  bool operator==(const ProvenanceRecord&) const = default;
};

// Years during which a dataset's contents were likely collected.
struct LicenseRange {
  int start_year = 0;
  int end_year = 0;

  static LicenseRange ending_at(int origin_year) { return {origin_year - 1, origin_year}; }
  bool contains(int year) const { return year >= start_year && year <= end_year; }

  bool operator==(const LicenseRange&) const = default;
};

enum class CaptureStatus { in_range, out_of_range_fallback, unavailable };

// One archived snapshot of a data source's terms as supplied by the user.
struct CaptureInput {
  int year = 0;
  std::string url;
  std::optional<std::string> content;

  bool operator==(const CaptureInput&) const = default;
};

// The capture chosen to govern a source. Year and url are absent only when
// the status is unavailable.
struct LicenseCapture {
  SubjectId source_id;
  std::optional<int> capture_year;
  std::optional<std::string> capture_url;
  std::optional<std::string> content;
  CaptureStatus status = CaptureStatus::unavailable;

  bool operator==(const LicenseCapture&) const = default;
};

// ---------------------------------------------------------------------------
// Rights and obligations
// ---------------------------------------------------------------------------

enum class Grant { Granted, Denied, Unspecified };

enum class ObligationKind {
  attribution,
  cite,
  link_license,
  share_alike,
  indicate_changes,
  takedown,
  indemnify,
  other
};

// Obligations compare by id only; the text is display wording.
struct Obligation {
  std::string id;
  std::string text;
  ObligationKind kind = ObligationKind::other;

  bool operator==(const Obligation& other) const { return id == other.id; }
  bool same_value(const Obligation& other) const {
    return id == other.id && text == other.text && kind == other.kind;
  }
};

// Appends every obligation of `extra` whose id is not yet in `into`.
void merge_obligations(std::vector<Obligation>& into, const std::vector<Obligation>& extra);

struct RightEntry {
  Grant grant = Grant::Unspecified;
  std::vector<Obligation> obligations;

  bool same_value(const RightEntry& other) const;
};

enum class RightGroup { standalone, model };

// The eleven fixed rights, in canonical order.
enum class Right {
  Access,
  Tagging,
  Distribute,
  Rerepresent,
  Benchmark,
  Research,
  Publish,
  InternalUse,
  CommercializeOutput,
  CommercializeModel,
  ModelReverseEngineer,
};

inline constexpr Right kStandaloneRights[] = {Right::Access, Right::Tagging, Right::Distribute,
                                               Right::Rerepresent};
inline constexpr Right kModelRights[] = {Right::Benchmark,
                                          Right::Research,
                                          Right::Publish,
                                          Right::InternalUse,
                                          Right::CommercializeOutput,
                                          Right::CommercializeModel,
                                          Right::ModelReverseEngineer};

RightGroup group_of(Right right) noexcept;
std::string_view to_string(Right right) noexcept;
std::optional<Right> fixed_right_from_string(std::string_view name) noexcept;
bool is_fixed_right(std::string_view name) noexcept;

// The three right maps shared by interpretations and verified licenses.
struct RightTable {
  std::map<Right, RightEntry> standalone;
  std::map<Right, RightEntry> model;
  std::map<std::string, RightEntry> custom;

  const RightEntry* find(std::string_view name) const;
  RightEntry* find(std::string_view name);
  // Missing rights read as Unspecified.
  Grant grant_of(std::string_view name) const;
  // Inserts or replaces; fixed names go to their group, others to custom.
  void set(std::string_view name, RightEntry entry);
  // Canonical order: standalone, model, then custom names sorted.
  std::vector<std::string> names() const;

  bool same_value(const RightTable& other) const;
};

struct LicenseMetadata {
  std::string licensor;
  std::string license_name;
  std::string dataset_name;
  std::optional<std::string> dataset_version;
  std::optional<std::string> credit_notice;
  std::optional<std::string> validity_period;
  std::optional<std::string> liability_warranty;
  std::optional<std::string> designated_third_parties;
  std::optional<std::string> additional_conditions;

  bool operator==(const LicenseMetadata&) const = default;
};

// Enhanced MDL decomposition of one license.
struct RightsVector {
  LicenseMetadata metadata;
  RightTable rights;

  bool same_value(const RightsVector& other) const {
    return metadata == other.metadata && rights.same_value(other.rights);
  }
};

// Every fixed right granted with the given obligations.
RightsVector all_granted(LicenseMetadata metadata, std::vector<Obligation> obligations = {});

struct Audit {
  std::string engine_version;
  bool unknown_denies = false;
  std::string lineage_digest;
  // subject id -> sha256 of the canonical interpretation, or "unavailable".
  std::map<SubjectId, std::string> input_digests;

  bool operator==(const Audit&) const = default;
};

struct VerifiedLicense {
  SubjectId root_id;
  RightTable rights;
  std::map<std::string, std::vector<SubjectId>> restrictors;
  std::vector<std::string> changed;
  std::vector<SubjectId> residual_risk_flags;
  Audit audit;

  const std::vector<SubjectId>& restrictors_of(std::string_view right) const;
  bool same_value(const VerifiedLicense& other) const;
};

struct UsageScenario {
  std::string id;
  std::vector<std::string> required_rights;
  std::string description;

  bool operator==(const UsageScenario&) const = default;
};

struct BlockingRight {
  std::string right;
  std::vector<SubjectId> restrictors;

  bool operator==(const BlockingRight&) const = default;
};

struct AssessmentRow {
  std::string scenario_id;
  bool permitted = false;
  std::vector<std::string> obligations;
  std::vector<BlockingRight> blocking_rights;
  // Obligations of granted rights the scenario does not require.
  std::vector<std::string> other_obligations;

  bool operator==(const AssessmentRow&) const = default;
};

struct AssessmentTable {
  SubjectId dataset_id;
  std::string dataset_name;
  std::vector<AssessmentRow> rows;
  std::vector<Obligation> legend;

  bool operator==(const AssessmentTable& other) const;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
  std::string field;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_provenance(const ProvenanceRecord& record);
ValidationReport validate_rights_vector(const RightsVector& vector);

std::string format_report(const ValidationReport& report);

}  // namespace dla
