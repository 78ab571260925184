#pragma once

// License catalog: frozen rights-vector templates for standard licenses,
// user-declared custom rights, and loading of authored interpretations.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dla/json_codec.hpp"
#include "dla/model.hpp"

namespace dla {

struct LicenseTemplate {
  std::string license_id;
  std::string version;
  std::string provenance_note;
  RightsVector vector;
  // sha256 of the canonical template document.
  std::string digest;
};

LicenseTemplate template_from_json(const Json& j, ParseContext& ctx);
Json to_json(const LicenseTemplate& t);

class Catalog {
 public:
  Catalog() = default;

  // Loads every *.json template in `dir`.
  static Catalog load_directory(const std::filesystem::path& dir);

  // Throws SchemaViolation when the template is not total, does not validate,
  // or repeats an (id, version) pair already loaded.
  void add_template(LicenseTemplate t);

  // An empty version selects the highest version shipped for the id.
  // Throws UnknownLicense.
  const LicenseTemplate& lookup_template(const std::string& license_id,
                                         const std::string& version = "") const;

  std::vector<const LicenseTemplate*> templates() const;

  // Returns a catalog that additionally accepts `right_name`. Throws
  // DuplicateRight if the name is a fixed right or already declared.
  Catalog extend_schema(const std::string& right_name, RightGroup applies_to) const;
  // Applies a {"custom_rights": [{"name", "applies_to"}]} document.
  Catalog extend_schema(const Json& schema_document) const;

  const std::map<std::string, RightGroup>& custom_rights() const noexcept { return custom_rights_; }
  bool knows_right(std::string_view name) const;

  // Declared custom rights missing from the vector read as Unspecified.
  RightsVector normalize(RightsVector vector) const;

 private:
  std::map<std::pair<std::string, std::string>, LicenseTemplate> templates_;
  std::map<std::string, RightGroup> custom_rights_;
};

struct TemplateRef {
  std::string license_id;
  std::string version;
  std::string digest;

  bool operator==(const TemplateRef&) const = default;
};

// One authored interpretation. An absent vector means the license content of
// the subject was unavailable and could not be interpreted.
struct Interpretation {
  SubjectId subject_id;
  std::optional<RightsVector> vector;
  std::optional<TemplateRef> template_ref;
  std::string notes;

  bool available() const noexcept { return vector.has_value(); }
};

// Throws ParseError for malformed fields and SchemaViolation when the
// resulting vector does not validate.
Interpretation load_interpretation(const Json& document, const Catalog& catalog, ParseContext& ctx);

}  // namespace dla
