#include "dla/catalog.hpp"

#include <algorithm>

#include "dla/digest.hpp"
#include "dla/error.hpp"

namespace dla {

namespace {

RightGroup group_from_string(std::string_view text) {
  if (text == "standalone") return RightGroup::standalone;
  if (text == "model") return RightGroup::model;
  throw Error(ErrorCode::ParseError,
              "invalid applies_to '" + std::string(text) + "' (expected standalone or model)");
}

// Numeric-aware version ordering ("4.0" < "10.0").
bool version_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& v) {
    std::vector<long> parts;
    std::size_t pos = 0;
    while (pos <= v.size()) {
      std::size_t dot = v.find('.', pos);
      std::string piece = v.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
      try {
        parts.push_back(std::stol(piece));
      } catch (...) {
        parts.push_back(-1);
      }
      if (dot == std::string::npos) break;
      pos = dot + 1;
    }
    return parts;
  };
  auto pa = split(a), pb = split(b);
  if (pa != pb) return pa < pb;
  return a < b;
}

void throw_if_invalid(const ValidationReport& report, const std::string& what) {
  if (report.empty()) return;
  throw Error(ErrorCode::SchemaViolation, what + ":\n" + format_report(report));
}

}  // namespace

LicenseTemplate template_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "template", ctx);
  LicenseTemplate t;
  t.license_id = in.string("license_id");
  t.version = in.string("version");
  t.provenance_note = in.string_or("provenance_note", "");
  t.vector = rights_vector_from_json(in.require("rights_vector"), ctx);
  in.finish();
  t.digest = sha256_hex(canonical(to_json(t)));
  return t;
}

Json to_json(const LicenseTemplate& t) {
  return Json{{"license_id", t.license_id},
              {"version", t.version},
              {"provenance_note", t.provenance_note},
              {"rights_vector", to_json(t.vector)}};
}

Catalog Catalog::load_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::Io, dir.string() + ": template directory not found");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Catalog catalog;
  for (const auto& file : files) {
    ParseContext ctx(Strictness::strict);
    try {
      catalog.add_template(template_from_json(read_json_file(file), ctx));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io) throw;
      throw Error(e.code(), file.string() + ": " + e.detail());
    }
  }
  return catalog;
}

void Catalog::add_template(LicenseTemplate t) {
  std::string name = t.license_id + " " + t.version;
  throw_if_invalid(validate_rights_vector(t.vector), "template " + name);
  for (const auto& right : t.vector.rights.names()) {
    if (t.vector.rights.grant_of(right) == Grant::Unspecified) {
      throw Error(ErrorCode::SchemaViolation,
                  "template " + name + ": right " + right + " is Unspecified; templates must be total");
    }
  }
  auto key = std::make_pair(t.license_id, t.version);
  if (templates_.contains(key)) {
    throw Error(ErrorCode::SchemaViolation, "template " + name + " is defined twice");
  }
  templates_.emplace(std::move(key), std::move(t));
}

const LicenseTemplate& Catalog::lookup_template(const std::string& license_id,
                                                const std::string& version) const {
  if (!version.empty()) {
    auto it = templates_.find({license_id, version});
    if (it != templates_.end()) return it->second;
    throw Error(ErrorCode::UnknownLicense, license_id + " version " + version);
  }
  const LicenseTemplate* best = nullptr;
  for (const auto& [key, t] : templates_) {
    if (key.first == license_id && (!best || version_less(best->version, t.version))) best = &t;
  }
  if (!best) throw Error(ErrorCode::UnknownLicense, license_id);
  return *best;
}

std::vector<const LicenseTemplate*> Catalog::templates() const {
  std::vector<const LicenseTemplate*> out;
  for (const auto& [_, t] : templates_) out.push_back(&t);
  return out;
}

Catalog Catalog::extend_schema(const std::string& right_name, RightGroup applies_to) const {
  if (right_name.empty()) throw Error(ErrorCode::SchemaViolation, "custom right name must be nonempty");
  if (is_fixed_right(right_name) || custom_rights_.contains(right_name)) {
    throw Error(ErrorCode::DuplicateRight, "right '" + right_name + "' already exists");
  }
  Catalog out = *this;
  out.custom_rights_.emplace(right_name, applies_to);
  return out;
}

Catalog Catalog::extend_schema(const Json& schema_document) const {
  ParseContext ctx(Strictness::strict);
  ObjectReader in(schema_document, "schema", ctx);
  Catalog out = *this;
  const Json& rights = in.require("custom_rights");
  if (!rights.is_array()) in.fail("custom_rights", "expected an array");
  for (const auto& r : rights) {
    ObjectReader rin(r, "schema.custom_rights[]", ctx);
    std::string name = rin.string("name");
    RightGroup group = group_from_string(rin.string("applies_to"));
    rin.finish();
    out = out.extend_schema(name, group);
  }
  in.finish();
  return out;
}

bool Catalog::knows_right(std::string_view name) const {
  return is_fixed_right(name) || custom_rights_.contains(std::string(name));
}

RightsVector Catalog::normalize(RightsVector vector) const {
  for (const auto& [name, _] : custom_rights_) vector.rights.custom.try_emplace(name);
  return vector;
}

// ---------------------------------------------------------------------------

namespace {

void apply_amendments(ObjectReader& in, const Json& amendments, RightsVector& vector,
                      const Catalog& catalog, ParseContext& ctx) {
  if (!amendments.is_object()) in.fail("amendments", "expected an object keyed by right name");
  for (const auto& [name, body] : amendments.items()) {
    std::string where = in.where() + ".amendments." + name;
    if (!catalog.knows_right(name)) {
      throw Error(ErrorCode::SchemaViolation, where + ": unknown right '" + name + "'");
    }
    ObjectReader ar(body, where, ctx);
    RightEntry entry;
    if (const RightEntry* existing = vector.rights.find(name)) entry = *existing;
    if (ar.has("grant")) {
      try {
        entry.grant = grant_from_string(ar.string("grant"));
      } catch (const Error& e) {
        ar.fail("grant", e.detail());
      }
    } else {
      ar.get("grant");
    }
    if (const Json* add = ar.get("add_obligations")) {
      if (!add->is_array()) ar.fail("add_obligations", "expected an array");
      std::vector<Obligation> extra;
      for (const auto& ob : *add) extra.push_back(obligation_from_json(ob, ctx));
      merge_obligations(entry.obligations, extra);
    }
    ar.finish();
    vector.rights.set(name, std::move(entry));
  }
}

void overlay_metadata(const Json& overrides, RightsVector& vector, ParseContext& ctx) {
  if (!overrides.is_object()) throw Error(ErrorCode::ParseError, "metadata: expected an object");
  Json merged = to_json(vector.metadata);
  for (const auto& [key, value] : overrides.items()) merged[key] = value;
  vector.metadata = metadata_from_json(merged, ctx);
}

void reconcile_custom_rights(const std::string& where, RightsVector& vector, const Catalog& catalog,
                             ParseContext& ctx) {
  const bool strict = ctx.strictness() == Strictness::strict;
  for (const auto& [name, _] : catalog.custom_rights()) {
    if (vector.rights.custom.contains(name)) continue;
    if (strict) {
      throw Error(ErrorCode::SchemaViolation,
                  where + ": declared custom right '" + name + "' is not populated");
    }
    ctx.warn(where + ": declared custom right '" + name + "' not populated; recorded Unspecified");
    vector.rights.custom[name] = RightEntry{};
  }
  for (const auto& [name, _] : vector.rights.custom) {
    if (is_fixed_right(name) || catalog.custom_rights().contains(name)) continue;
    if (strict) {
      throw Error(ErrorCode::SchemaViolation, where + ": custom right '" + name + "' is not declared");
    }
    ctx.warn(where + ": custom right '" + name + "' is not declared in the schema");
  }
}

}  // namespace

Interpretation load_interpretation(const Json& document, const Catalog& catalog, ParseContext& ctx) {
  std::string where = "interpretation";
  if (document.is_object() && document.contains("subject_id") && document["subject_id"].is_string()) {
    where += "[" + document["subject_id"].get<std::string>() + "]";
  }
  ObjectReader in(document, where, ctx);
  Interpretation out;
  out.subject_id = in.string("subject_id");
  out.notes = in.string_or("notes", "");
  std::string status = in.string_or("status", "interpreted");
  if (status != "interpreted" && status != "unavailable") {
    in.fail("status", "invalid status '" + status + "' (expected interpreted or unavailable)");
  }

  const Json* tmpl = in.get("template");
  const Json* inline_vector = in.get("rights_vector");
  const Json* metadata = in.get("metadata");
  const Json* amendments = in.get("amendments");

  if (status == "unavailable") {
    if (tmpl || inline_vector || metadata || amendments) {
      in.fail("status", "an unavailable interpretation must not carry rights");
    }
    in.finish();
    return out;
  }

  if (static_cast<bool>(tmpl) == static_cast<bool>(inline_vector)) {
    in.fail("rights_vector", "exactly one of template or rights_vector is required");
  }
  RightsVector vector;
  if (tmpl) {
    ObjectReader tr(*tmpl, where + ".template", ctx);
    std::string id = tr.string("license_id");
    std::string version = tr.string_or("version", "");
    tr.finish();
    const LicenseTemplate& t = catalog.lookup_template(id, version);
    vector = t.vector;
    out.template_ref = TemplateRef{t.license_id, t.version, t.digest};
  } else {
    vector = rights_vector_from_json(*inline_vector, ctx);
  }
  if (metadata) overlay_metadata(*metadata, vector, ctx);
  if (amendments) apply_amendments(in, *amendments, vector, catalog, ctx);
  in.finish();

  throw_if_invalid(validate_rights_vector(vector), where);
  reconcile_custom_rights(where, vector, catalog, ctx);
  out.vector = std::move(vector);
  return out;
}

}  // namespace dla
