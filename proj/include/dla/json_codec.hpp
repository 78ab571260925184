#pragma once

// Canonical JSON form of the domain types. Keys are snake_case and emitted in
// sorted order; absent optionals are written as null. Parsing rejects unknown
// fields in strict mode and records a warning for them in lenient mode.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dla/model.hpp"
#include "json.hpp"

namespace dla {

using Json = nlohmann::json;

enum class Strictness { strict, lenient };

class ParseContext {
 public:
  explicit ParseContext(Strictness strictness = Strictness::strict) : strictness_(strictness) {}

  Strictness strictness() const noexcept { return strictness_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  // Throws ParseError in strict mode, warns otherwise.
  void unknown_field(std::string_view where, std::string_view field);

 private:
  Strictness strictness_;
  std::vector<std::string> warnings_;
};

// Reads fields from one JSON object and tracks which were consumed, so that
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const Json& object, std::string where, ParseContext& ctx);

  const std::string& where() const noexcept { return where_; }
  ParseContext& context() noexcept { return ctx_; }

  bool has(std::string_view key) const;
  // Returns nullptr when the key is missing or null.
  const Json* get(std::string_view key);
  const Json& require(std::string_view key);

  std::string string(std::string_view key);
  std::string string_or(std::string_view key, std::string fallback);
  std::optional<std::string> optional_string(std::string_view key);
  std::optional<int> optional_int(std::string_view key);
  int integer(std::string_view key);
  bool boolean_or(std::string_view key, bool fallback);

  [[noreturn]] void fail(std::string_view key, const std::string& message) const;

  void finish();

 private:
  const Json& object_;
  std::string where_;
  ParseContext& ctx_;
  std::vector<std::string> seen_;
};

std::string to_string(SubjectKind kind);
std::string to_string(TriState value);
std::string to_string(LicenseFoundVia value);
std::string to_string(CaptureStatus value);
std::string to_string(Grant grant);
std::string to_string(ObligationKind kind);

SubjectKind subject_kind_from_string(std::string_view text);
TriState tri_state_from_string(std::string_view text);
LicenseFoundVia found_via_from_string(std::string_view text);
CaptureStatus capture_status_from_string(std::string_view text);
Grant grant_from_string(std::string_view text);
ObligationKind obligation_kind_from_string(std::string_view text);

Json to_json(const ProvenanceRecord& record);
Json to_json(const LicenseRange& range);
Json to_json(const CaptureInput& capture);
Json to_json(const LicenseCapture& capture);
Json to_json(const Obligation& obligation);
Json to_json(const RightEntry& entry);
Json to_json(const LicenseMetadata& metadata);
Json to_json(const RightsVector& vector);
Json to_json(const Audit& audit);
Json to_json(const VerifiedLicense& verified);
Json to_json(const UsageScenario& scenario);
Json to_json(const AssessmentTable& table);

ProvenanceRecord provenance_from_json(const Json& j, ParseContext& ctx);
LicenseRange range_from_json(const Json& j, ParseContext& ctx);
CaptureInput capture_input_from_json(const Json& j, ParseContext& ctx);
std::vector<CaptureInput> capture_list_from_json(const Json& j, ParseContext& ctx);
LicenseCapture capture_from_json(const Json& j, ParseContext& ctx);
Obligation obligation_from_json(const Json& j, ParseContext& ctx);
RightEntry right_entry_from_json(const Json& j, ParseContext& ctx, const std::string& where);
LicenseMetadata metadata_from_json(const Json& j, ParseContext& ctx);
// Reads the right maps of an object that holds standalone_rights,
// model_rights and optional custom_rights.
RightTable right_table_from(ObjectReader& reader);
void write_right_table(Json& out, const RightTable& table);
RightsVector rights_vector_from_json(const Json& j, ParseContext& ctx);
Audit audit_from_json(const Json& j, ParseContext& ctx);
VerifiedLicense verified_from_json(const Json& j, ParseContext& ctx);
UsageScenario scenario_from_json(const Json& j, ParseContext& ctx);
AssessmentTable assessment_from_json(const Json& j, ParseContext& ctx);

// Byte-stable text: two-space indent, sorted keys, trailing newline.
std::string canonical(const Json& j);

// JSON syntax errors and unreadable files both raise ErrorCode::Io.
Json parse_json_text(std::string_view text, const std::string& origin);
Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace dla
