#include "dla/json_codec.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dla/error.hpp"

namespace dla {

void ParseContext::unknown_field(std::string_view where, std::string_view field) {
  std::string message = "unknown field '" + std::string(field) + "' in " + std::string(where);
  if (strictness_ == Strictness::strict) throw Error(ErrorCode::ParseError, message);
  warn(std::move(message));
}

ObjectReader::ObjectReader(const Json& object, std::string where, ParseContext& ctx)
    : object_(object), where_(std::move(where)), ctx_(ctx) {
  if (!object_.is_object()) throw Error(ErrorCode::ParseError, where_ + ": expected a JSON object");
}

bool ObjectReader::has(std::string_view key) const {
  auto it = object_.find(key);
  return it != object_.end() && !it->is_null();
}

const Json* ObjectReader::get(std::string_view key) {
  seen_.emplace_back(key);
  auto it = object_.find(key);
  if (it == object_.end() || it->is_null()) return nullptr;
  return &*it;
}

const Json& ObjectReader::require(std::string_view key) {
  const Json* value = get(key);
  if (!value) fail(key, "required field is missing");
  return *value;
}

void ObjectReader::fail(std::string_view key, const std::string& message) const {
  throw Error(ErrorCode::ParseError, where_ + "." + std::string(key) + ": " + message);
}

std::string ObjectReader::string(std::string_view key) {
  const Json& v = require(key);
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

std::string ObjectReader::string_or(std::string_view key, std::string fallback) {
  auto v = optional_string(key);
  return v ? *v : std::move(fallback);
}

std::optional<std::string> ObjectReader::optional_string(std::string_view key) {
  const Json* v = get(key);
  if (!v) return std::nullopt;
  if (!v->is_string()) fail(key, "expected a string or null");
  return v->get<std::string>();
}

std::optional<int> ObjectReader::optional_int(std::string_view key) {
  const Json* v = get(key);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) fail(key, "expected an integer or null");
  return v->get<int>();
}

int ObjectReader::integer(std::string_view key) {
  const Json& v = require(key);
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<int>();
}

bool ObjectReader::boolean_or(std::string_view key, bool fallback) {
  const Json* v = get(key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(key, "expected a boolean");
  return v->get<bool>();
}

void ObjectReader::finish() {
  for (const auto& [key, _] : object_.items()) {
    if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) ctx_.unknown_field(where_, key);
  }
}

// ---------------------------------------------------------------------------
// Enumerations

namespace {

template <typename E, std::size_t N>
E enum_from(std::string_view text, const std::pair<E, std::string_view> (&table)[N],
            std::string_view what) {
  for (const auto& [value, name] : table) {
    if (name == text) return value;
  }
  std::string allowed;
  for (const auto& [value, name] : table) {
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  throw Error(ErrorCode::ParseError,
              "invalid " + std::string(what) + " '" + std::string(text) + "' (expected one of " +
                  allowed + ")");
}

template <typename E, std::size_t N>
std::string enum_name(E value, const std::pair<E, std::string_view> (&table)[N]) {
  for (const auto& [v, name] : table) {
    if (v == value) return std::string(name);
  }
  return "?";
}

constexpr std::pair<SubjectKind, std::string_view> kSubjectKinds[] = {
    {SubjectKind::dataset, "dataset"},
    {SubjectKind::website, "website"},
    {SubjectKind::search_engine, "search_engine"},
};
constexpr std::pair<TriState, std::string_view> kTriStates[] = {
    {TriState::yes, "yes"}, {TriState::no, "no"}, {TriState::unknown, "unknown"}};
constexpr std::pair<LicenseFoundVia, std::string_view> kFoundVia[] = {
    {LicenseFoundVia::official_website, "official_website"},
    {LicenseFoundVia::packaged_file, "packaged_file"},
    {LicenseFoundVia::owner_contact, "owner_contact"},
    {LicenseFoundVia::none_found, "none_found"},
};
constexpr std::pair<CaptureStatus, std::string_view> kCaptureStatus[] = {
    {CaptureStatus::in_range, "in_range"},
    {CaptureStatus::out_of_range_fallback, "out_of_range_fallback"},
    {CaptureStatus::unavailable, "unavailable"},
};
constexpr std::pair<Grant, std::string_view> kGrants[] = {
    {Grant::Granted, "Granted"}, {Grant::Denied, "Denied"}, {Grant::Unspecified, "Unspecified"}};
constexpr std::pair<ObligationKind, std::string_view> kObligationKinds[] = {
    {ObligationKind::attribution, "attribution"},
    {ObligationKind::cite, "cite"},
    {ObligationKind::link_license, "link_license"},
    {ObligationKind::share_alike, "share_alike"},
    {ObligationKind::indicate_changes, "indicate_changes"},
    {ObligationKind::takedown, "takedown"},
    {ObligationKind::indemnify, "indemnify"},
    {ObligationKind::other, "other"},
};

// Wraps enum parsing so the error names the offending field.
template <typename Fn>
auto enum_field(ObjectReader& reader, std::string_view key, Fn parse) {
  std::string text = reader.string(key);
  try {
    return parse(text);
  } catch (const Error& e) {
    reader.fail(key, e.detail());
  }
}

template <typename Fn, typename E>
E enum_field_or(ObjectReader& reader, std::string_view key, Fn parse, E fallback) {
  if (!reader.has(key)) {
    reader.get(key);
    return fallback;
  }
  return enum_field(reader, key, parse);
}

Json optional_to_json(const std::optional<std::string>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_to_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

Json string_list(const std::vector<std::string>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(v);
  return out;
}

std::vector<std::string> string_list_from(ObjectReader& reader, std::string_view key,
                                          bool required) {
  std::vector<std::string> out;
  const Json* v = required ? &reader.require(key) : reader.get(key);
  if (!v) return out;
  if (!v->is_array()) reader.fail(key, "expected an array of strings");
  for (const auto& item : *v) {
    if (!item.is_string()) reader.fail(key, "expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

}  // namespace

std::string to_string(SubjectKind kind) { return enum_name(kind, kSubjectKinds); }
std::string to_string(TriState value) { return enum_name(value, kTriStates); }
std::string to_string(LicenseFoundVia value) { return enum_name(value, kFoundVia); }
std::string to_string(CaptureStatus value) { return enum_name(value, kCaptureStatus); }
std::string to_string(Grant grant) { return enum_name(grant, kGrants); }
std::string to_string(ObligationKind kind) { return enum_name(kind, kObligationKinds); }

SubjectKind subject_kind_from_string(std::string_view t) { return enum_from(t, kSubjectKinds, "subject_kind"); }
TriState tri_state_from_string(std::string_view t) { return enum_from(t, kTriStates, "tri-state value"); }
LicenseFoundVia found_via_from_string(std::string_view t) { return enum_from(t, kFoundVia, "license_found_via"); }
CaptureStatus capture_status_from_string(std::string_view t) { return enum_from(t, kCaptureStatus, "capture status"); }
Grant grant_from_string(std::string_view t) { return enum_from(t, kGrants, "grant"); }
ObligationKind obligation_kind_from_string(std::string_view t) { return enum_from(t, kObligationKinds, "obligation kind"); }

// ---------------------------------------------------------------------------
// Provenance and captures

Json to_json(const ProvenanceRecord& r) {
  Json j;
  j["subject_id"] = r.subject_id;
  j["subject_kind"] = to_string(r.subject_kind);
  j["dataset_name"] = r.dataset_name;
  j["dataset_version"] = optional_to_json(r.dataset_version);
  j["origin_year"] = optional_to_json(r.origin_year);
  j["origin_url"] = r.origin_url;
  j["description"] = r.description;
  j["collection_process"] = r.collection_process;
  j["downloaded_outlet"] = optional_to_json(r.downloaded_outlet);
  j["outlet_licensed"] = to_string(r.outlet_licensed);
  j["publicly_available"] = to_string(r.publicly_available);
  j["notes"] = r.notes;
  j["license_found_via"] = to_string(r.license_found_via);
  j["license_location"] = optional_to_json(r.license_location);
  j["license_content"] = optional_to_json(r.license_content);
  j["digest"] = r.digest ? Json{{"algorithm", r.digest->algorithm}, {"hex", r.digest->hex}} : Json(nullptr);
  j["size_bytes"] = r.size_bytes ? Json(*r.size_bytes) : Json(nullptr);
  j["archive_format"] = optional_to_json(r.archive_format);
  return j;
}

ProvenanceRecord provenance_from_json(const Json& j, ParseContext& ctx) {
  std::string where = "provenance";
  if (j.is_object() && j.contains("subject_id") && j["subject_id"].is_string()) {
    where += "[" + j["subject_id"].get<std::string>() + "]";
  }
  ObjectReader in(j, where, ctx);
  ProvenanceRecord r;
  r.subject_id = in.string("subject_id");
  r.subject_kind = enum_field(in, "subject_kind", subject_kind_from_string);
  r.dataset_name = in.string("dataset_name");
  r.dataset_version = in.optional_string("dataset_version");
  r.origin_year = in.optional_int("origin_year");
  r.origin_url = in.string_or("origin_url", "");
  r.description = in.string_or("description", "");
  r.collection_process = in.string_or("collection_process", "");
  r.downloaded_outlet = in.optional_string("downloaded_outlet");
  r.outlet_licensed = enum_field_or(in, "outlet_licensed", tri_state_from_string, TriState::unknown);
  r.publicly_available =
      enum_field_or(in, "publicly_available", tri_state_from_string, TriState::unknown);
  r.notes = in.string_or("notes", "");
  r.license_found_via = enum_field(in, "license_found_via", found_via_from_string);
  r.license_location = in.optional_string("license_location");
  r.license_content = in.optional_string("license_content");
  if (const Json* d = in.get("digest")) {
    ObjectReader dr(*d, where + ".digest", ctx);
    r.digest = Digest{dr.string("algorithm"), dr.string("hex")};
    dr.finish();
  }
  if (const Json* s = in.get("size_bytes")) {
    if (!s->is_number_unsigned()) in.fail("size_bytes", "expected a nonnegative integer or null");
    r.size_bytes = s->get<std::uint64_t>();
  }
  r.archive_format = in.optional_string("archive_format");
  in.finish();
  return r;
}

Json to_json(const LicenseRange& range) {
  return Json{{"start_year", range.start_year}, {"end_year", range.end_year}};
}

LicenseRange range_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "license_range", ctx);
  LicenseRange r{in.integer("start_year"), in.integer("end_year")};
  in.finish();
  return r;
}

Json to_json(const CaptureInput& c) {
  return Json{{"year", c.year}, {"url", c.url}, {"content", optional_to_json(c.content)}};
}

CaptureInput capture_input_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "capture", ctx);
  CaptureInput c;
  c.year = in.integer("year");
  c.url = in.string("url");
  c.content = in.optional_string("content");
  in.finish();
  return c;
}

std::vector<CaptureInput> capture_list_from_json(const Json& j, ParseContext& ctx) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "capture list: expected a JSON array");
  std::vector<CaptureInput> out;
  for (const auto& item : j) out.push_back(capture_input_from_json(item, ctx));
  return out;
}

Json to_json(const LicenseCapture& c) {
  return Json{{"source_id", c.source_id},
              {"capture_year", optional_to_json(c.capture_year)},
              {"capture_url", optional_to_json(c.capture_url)},
              {"content", optional_to_json(c.content)},
              {"status", to_string(c.status)}};
}

LicenseCapture capture_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "license_capture", ctx);
  LicenseCapture c;
  c.source_id = in.string("source_id");
  c.capture_year = in.optional_int("capture_year");
  c.capture_url = in.optional_string("capture_url");
  c.content = in.optional_string("content");
  c.status = enum_field(in, "status", capture_status_from_string);
  in.finish();
  if ((c.status == CaptureStatus::unavailable) != !c.content.has_value()) {
    throw Error(ErrorCode::ParseError,
                "license_capture: status unavailable must coincide with absent content");
  }
  return c;
}

// ---------------------------------------------------------------------------
// Rights

Json to_json(const Obligation& ob) {
  return Json{{"id", ob.id}, {"text", ob.text}, {"kind", to_string(ob.kind)}};
}

Obligation obligation_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "obligation", ctx);
  Obligation ob;
  ob.id = in.string("id");
  ob.text = in.string_or("text", "");
  ob.kind = enum_field_or(in, "kind", obligation_kind_from_string, ObligationKind::other);
  in.finish();
  return ob;
}

Json to_json(const RightEntry& entry) {
  Json obligations = Json::array();
  for (const auto& ob : entry.obligations) obligations.push_back(to_json(ob));
  return Json{{"grant", to_string(entry.grant)}, {"obligations", obligations}};
}

RightEntry right_entry_from_json(const Json& j, ParseContext& ctx, const std::string& where) {
  ObjectReader in(j, where, ctx);
  RightEntry entry;
  entry.grant = enum_field(in, "grant", grant_from_string);
  if (const Json* obs = in.get("obligations")) {
    if (!obs->is_array()) in.fail("obligations", "expected an array");
    for (const auto& ob : *obs) entry.obligations.push_back(obligation_from_json(ob, ctx));
  }
  in.finish();
  return entry;
}

Json to_json(const LicenseMetadata& m) {
  return Json{{"licensor", m.licensor},
              {"license_name", m.license_name},
              {"dataset_name", m.dataset_name},
              {"dataset_version", optional_to_json(m.dataset_version)},
              {"credit_notice", optional_to_json(m.credit_notice)},
              {"validity_period", optional_to_json(m.validity_period)},
              {"liability_warranty", optional_to_json(m.liability_warranty)},
              {"designated_third_parties", optional_to_json(m.designated_third_parties)},
              {"additional_conditions", optional_to_json(m.additional_conditions)}};
}

LicenseMetadata metadata_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "metadata", ctx);
  LicenseMetadata m;
  m.licensor = in.string_or("licensor", "");
  m.license_name = in.string_or("license_name", "");
  m.dataset_name = in.string_or("dataset_name", "");
  m.dataset_version = in.optional_string("dataset_version");
  m.credit_notice = in.optional_string("credit_notice");
  m.validity_period = in.optional_string("validity_period");
  m.liability_warranty = in.optional_string("liability_warranty");
  m.designated_third_parties = in.optional_string("designated_third_parties");
  m.additional_conditions = in.optional_string("additional_conditions");
  in.finish();
  return m;
}

namespace {

void read_fixed_group(ObjectReader& in, std::string_view key, std::map<Right, RightEntry>& group) {
  const Json* obj = in.get(key);
  if (!obj) return;
  if (!obj->is_object()) in.fail(key, "expected an object keyed by right name");
  for (const auto& [name, value] : obj->items()) {
    std::string where = in.where() + "." + std::string(key) + "." + name;
    auto right = fixed_right_from_string(name);
    if (!right) {
      in.context().unknown_field(in.where() + "." + std::string(key), name);
      continue;
    }
    group[*right] = right_entry_from_json(value, in.context(), where);
  }
}

}  // namespace

RightTable right_table_from(ObjectReader& in) {
  RightTable table;
  read_fixed_group(in, "standalone_rights", table.standalone);
  read_fixed_group(in, "model_rights", table.model);
  if (const Json* custom = in.get("custom_rights")) {
    if (!custom->is_object()) in.fail("custom_rights", "expected an object keyed by right name");
    for (const auto& [name, value] : custom->items()) {
      table.custom[name] =
          right_entry_from_json(value, in.context(), in.where() + ".custom_rights." + name);
    }
  }
  return table;
}

void write_right_table(Json& out, const RightTable& table) {
  Json standalone = Json::object(), model = Json::object(), custom = Json::object();
  for (const auto& [r, e] : table.standalone) standalone[std::string(to_string(r))] = to_json(e);
  for (const auto& [r, e] : table.model) model[std::string(to_string(r))] = to_json(e);
  for (const auto& [n, e] : table.custom) custom[n] = to_json(e);
  out["standalone_rights"] = standalone;
  out["model_rights"] = model;
  out["custom_rights"] = custom;
}

Json to_json(const RightsVector& v) {
  Json j;
  j["metadata"] = to_json(v.metadata);
  write_right_table(j, v.rights);
  return j;
}

RightsVector rights_vector_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "rights_vector", ctx);
  RightsVector v;
  if (const Json* m = in.get("metadata")) v.metadata = metadata_from_json(*m, ctx);
  v.rights = right_table_from(in);
  in.finish();
  return v;
}

// ---------------------------------------------------------------------------
// Verified license

Json to_json(const Audit& a) {
  Json digests = Json::object();
  for (const auto& [id, d] : a.input_digests) digests[id] = d;
  return Json{{"engine_version", a.engine_version},
              {"unknown_denies", a.unknown_denies},
              {"lineage_digest", a.lineage_digest},
              {"input_digests", digests}};
}

Audit audit_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "audit", ctx);
  Audit a;
  a.engine_version = in.string("engine_version");
  a.unknown_denies = in.boolean_or("unknown_denies", false);
  a.lineage_digest = in.string_or("lineage_digest", "");
  if (const Json* d = in.get("input_digests")) {
    if (!d->is_object()) in.fail("input_digests", "expected an object");
    for (const auto& [id, value] : d->items()) {
      if (!value.is_string()) in.fail("input_digests", "expected string digests");
      a.input_digests[id] = value.get<std::string>();
    }
  }
  in.finish();
  return a;
}

Json to_json(const VerifiedLicense& v) {
  Json j;
  j["root_id"] = v.root_id;
  write_right_table(j, v.rights);
  Json restrictors = Json::object();
  for (const auto& [right, ids] : v.restrictors) restrictors[right] = string_list(ids);
  j["restrictors"] = restrictors;
  j["changed"] = string_list(v.changed);
  j["residual_risk_flags"] = string_list(v.residual_risk_flags);
  j["audit"] = to_json(v.audit);
  return j;
}

VerifiedLicense verified_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "verified_license", ctx);
  VerifiedLicense v;
  v.root_id = in.string("root_id");
  v.rights = right_table_from(in);
  if (const Json* r = in.get("restrictors")) {
    if (!r->is_object()) in.fail("restrictors", "expected an object");
    for (const auto& [right, ids] : r->items()) {
      if (!ids.is_array()) in.fail("restrictors", "expected arrays of subject ids");
      auto& list = v.restrictors[right];
      for (const auto& id : ids) list.push_back(id.get<std::string>());
    }
  }
  v.changed = string_list_from(in, "changed", false);
  v.residual_risk_flags = string_list_from(in, "residual_risk_flags", false);
  v.audit = audit_from_json(in.require("audit"), ctx);
  in.finish();
  return v;
}

// ---------------------------------------------------------------------------
// Scenarios and assessment

Json to_json(const UsageScenario& s) {
  return Json{{"id", s.id}, {"required_rights", string_list(s.required_rights)}, {"description", s.description}};
}

UsageScenario scenario_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "scenario", ctx);
  UsageScenario s;
  s.id = in.string("id");
  s.required_rights = string_list_from(in, "required_rights", true);
  s.description = in.string_or("description", "");
  in.finish();
  return s;
}

Json to_json(const AssessmentTable& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json blocking = Json::array();
    for (const auto& b : row.blocking_rights) {
      blocking.push_back(Json{{"right", b.right}, {"restrictors", string_list(b.restrictors)}});
    }
    rows.push_back(Json{{"scenario", row.scenario_id},
                        {"permitted", row.permitted},
                        {"obligations", string_list(row.obligations)},
                        {"blocking_rights", blocking},
                        {"other_obligations", string_list(row.other_obligations)}});
  }
  Json legend = Json::array();
  for (const auto& ob : t.legend) legend.push_back(to_json(ob));
  return Json{{"dataset_id", t.dataset_id}, {"dataset_name", t.dataset_name}, {"rows", rows}, {"legend", legend}};
}

AssessmentTable assessment_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "assessment", ctx);
  AssessmentTable t;
  t.dataset_id = in.string("dataset_id");
  t.dataset_name = in.string_or("dataset_name", "");
  for (const auto& rj : in.require("rows")) {
    ObjectReader rin(rj, "assessment.row", ctx);
    AssessmentRow row;
    row.scenario_id = rin.string("scenario");
    row.permitted = rin.boolean_or("permitted", false);
    row.obligations = string_list_from(rin, "obligations", false);
    if (const Json* b = rin.get("blocking_rights")) {
      for (const auto& bj : *b) {
        ObjectReader bin(bj, "assessment.row.blocking_right", ctx);
        BlockingRight br;
        br.right = bin.string("right");
        br.restrictors = string_list_from(bin, "restrictors", false);
        bin.finish();
        row.blocking_rights.push_back(std::move(br));
      }
    }
    row.other_obligations = string_list_from(rin, "other_obligations", false);
    rin.finish();
    t.rows.push_back(std::move(row));
  }
  if (const Json* legend = in.get("legend")) {
    for (const auto& ob : *legend) t.legend.push_back(obligation_from_json(ob, ctx));
  }
  in.finish();
  return t;
}

// ---------------------------------------------------------------------------

std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Io, origin + ": malformed JSON: " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, path.string() + ": read failed");
  return buffer.str();
}

Json read_json_file(const std::filesystem::path& path) {
  return parse_json_text(read_text_file(path), path.string());
}

}  // namespace dla
