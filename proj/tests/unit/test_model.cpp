#include "doctest.h"
#include "dla/error.hpp"
#include "dla/json_codec.hpp"
#include "testkit.hpp"

using namespace dla;
using namespace testkit;

namespace {

ProvenanceRecord cifar_record() {
  ProvenanceRecord r = record("cifar-10", SubjectKind::dataset, 2009);
  r.dataset_name = "CIFAR-10";
  r.origin_url = "https://www.cs.toronto.edu/~kriz/cifar.html";
  r.digest = Digest{"MD5", "c58f30108f718f92721af3b95e74349a"};
  r.size_bytes = 170498071;
  r.archive_format = "tar.gz";
  r.publicly_available = TriState::yes;
  r.license_content = "Please cite it if you intend to use this dataset.";
  return r;
}

bool mentions(const ValidationReport& report, const std::string& field, const std::string& rule) {
  for (const auto& v : report) {
    if (v.field.find(field) != std::string::npos && v.rule.find(rule) != std::string::npos) return true;
  }
  return false;
}

template <typename T, typename Parse>
void check_round_trip(const T& value, Parse parse) {
  ParseContext ctx(Strictness::strict);
  const std::string first = canonical(to_json(value));
  T back = parse(parse_json_text(first, "round-trip"), ctx);
  CHECK(canonical(to_json(back)) == first);
}

}  // namespace

TEST_CASE("provenance validation") {
  CHECK(validate_provenance(cifar_record()).empty());

  ProvenanceRecord no_year = cifar_record();
  no_year.origin_year.reset();
  auto report = validate_provenance(no_year);
  REQUIRE(report.size() == 1);
  CHECK(report[0].field == "origin_year");

  ProvenanceRecord short_md5 = cifar_record();
  short_md5.digest->hex.pop_back();
  report = validate_provenance(short_md5);
  REQUIRE(report.size() == 1);
  CHECK(report[0].field == "digest.hex");
  CHECK(report[0].rule.find("length") != std::string::npos);

  ProvenanceRecord website = record("google", SubjectKind::website, std::nullopt);
  CHECK(validate_provenance(website).empty());

  ProvenanceRecord none_found = website;
  none_found.license_found_via = LicenseFoundVia::none_found;
  none_found.license_content = "text";
  CHECK(mentions(validate_provenance(none_found), "license_content", ""));

  ProvenanceRecord bad_alg = cifar_record();
  bad_alg.digest->algorithm = "CRC99";
  CHECK(mentions(validate_provenance(bad_alg), "digest", ""));

  ProvenanceRecord not_hex = cifar_record();
  not_hex.digest->hex[0] = 'z';
  CHECK(mentions(validate_provenance(not_hex), "digest", ""));

  ProvenanceRecord empty_id = cifar_record();
  empty_id.subject_id.clear();
  CHECK(mentions(validate_provenance(empty_id), "subject_id", ""));
}

TEST_CASE("digest lengths") {
  CHECK(digest_hex_length("MD5") == 32u);
  CHECK(digest_hex_length("sha-1") == 40u);
  CHECK(digest_hex_length("SHA256") == 64u);
  CHECK(digest_hex_length("sha_512") == 128u);
  CHECK_FALSE(digest_hex_length("whirlpool").has_value());
}

TEST_CASE("rights vector validation") {
  Obligation cite{"cite-cifar10", "Cite paper", ObligationKind::cite};
  RightsVector cifar = all_granted({"Alex Krizhevsky", "Custom license", "CIFAR-10"}, {cite});
  CHECK(validate_rights_vector(cifar).empty());

  RightsVector missing = cifar;
  missing.rights.model.erase(Right::ModelReverseEngineer);
  auto report = validate_rights_vector(missing);
  REQUIRE(report.size() == 1);
  CHECK(report[0].rule == "missing right");
  CHECK(report[0].field.find("ModelReverseEngineer") != std::string::npos);

  RightsVector colliding = cifar;
  colliding.rights.custom["Distribute"] = {Grant::Granted, {}};
  report = validate_rights_vector(colliding);
  REQUIRE(report.size() == 1);
  CHECK(report[0].rule.find("custom key collides") != std::string::npos);

  RightsVector misplaced = cifar;
  misplaced.rights.model[Right::Access] = {Grant::Granted, {}};
  CHECK_FALSE(validate_rights_vector(misplaced).empty());

  RightsVector dup = cifar;
  dup.rights.standalone[Right::Access].obligations.push_back(cite);
  CHECK_FALSE(validate_rights_vector(dup).empty());
}

TEST_CASE("validation is pure") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    ProvenanceRecord r = random_record(rng, random_token(rng));
    CHECK(validate_provenance(r) == validate_provenance(r));
    RightsVector v = random_vector(rng, 0.3);
    CHECK(validate_rights_vector(v) == validate_rights_vector(v));
  }
}

TEST_CASE("obligation union is idempotent, commutative and associative by id") {
  Rng rng(11);
  auto ids = [](const std::vector<Obligation>& obs) {
    std::set<std::string> s;
    for (const auto& o : obs) s.insert(o.id);
    return s;
  };
  auto merged = [](std::vector<Obligation> a, const std::vector<Obligation>& b) {
    merge_obligations(a, b);
    return a;
  };
  for (int i = 0; i < 500; ++i) {
    auto a = random_obligations(rng), b = random_obligations(rng), c = random_obligations(rng);
    CHECK(merged(a, a) == a);
    CHECK(ids(merged(a, b)) == ids(merged(b, a)));
    CHECK(merged(merged(a, b), c) == merged(a, merged(b, c)));
    auto ab = merged(a, b);
    CHECK(std::equal(a.begin(), a.end(), ab.begin()));
    CHECK(ab.size() == ids(ab).size());
  }
}

TEST_CASE("serialization round-trips for every type") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    check_round_trip(random_record(rng, random_token(rng)), provenance_from_json);
    check_round_trip(random_vector(rng, 0.5), rights_vector_from_json);
    check_round_trip(random_metadata(rng), metadata_from_json);
    int y = pick(rng, 1900, 2100);
    check_round_trip(LicenseRange::ending_at(y), range_from_json);
    check_round_trip(CaptureInput{y, random_text(rng), maybe_text(rng)}, capture_input_from_json);

    LicenseCapture cap;
    cap.source_id = random_token(rng);
    if (coin(rng)) {
      cap.capture_year = y;
      cap.capture_url = random_text(rng);
      cap.content = random_text(rng);
      cap.status = coin(rng) ? CaptureStatus::in_range : CaptureStatus::out_of_range_fallback;
    }
    check_round_trip(cap, capture_from_json);
    for (const auto& ob : random_obligations(rng)) check_round_trip(ob, obligation_from_json);

    RandomCase c = random_case(rng);
    VerifiedLicense verified = verify(graph_of(c), c.interpretations);
    check_round_trip(verified, verified_from_json);
    check_round_trip(verified.audit, audit_from_json);
    {
      ParseContext ctx(Strictness::strict);
      VerifiedLicense back = verified_from_json(to_json(verified), ctx);
      CHECK(back.same_value(verified));
    }

    UsageScenario s{random_token(rng), {"Distribute", "CommercializeModel"}, random_text(rng)};
    check_round_trip(s, scenario_from_json);

    AssessmentTable table;
    table.dataset_id = c.root;
    table.dataset_name = random_text(rng);
    AssessmentRow row;
    row.scenario_id = "DD";
    row.permitted = false;
    row.blocking_rights = {{"Distribute", {"flickr", "google"}}};
    table.rows.push_back(row);
    row.scenario_id = "CAI";
    row.permitted = true;
    row.blocking_rights.clear();
    row.obligations = {"B"};
    row.other_obligations = {"E"};
    table.rows.push_back(row);
    table.legend = obligation_pool();
    check_round_trip(table, assessment_from_json);
  }
}

TEST_CASE("canonical serialization is byte-stable") {
  Rng rng(3);
  RightsVector v = random_vector(rng, 1.0);
  Json j = to_json(v);
  CHECK(canonical(j) == canonical(parse_json_text(canonical(j), "x")));
  CHECK(canonical(j).back() == '\n');
}

TEST_CASE("strict and lenient parsing") {
  Json j = to_json(cifar_record());
  j["favourite_colour"] = "blue";
  ParseContext strict(Strictness::strict);
  CHECK_THROWS_AS(provenance_from_json(j, strict), Error);
  ParseContext lenient(Strictness::lenient);
  CHECK(provenance_from_json(j, lenient) == cifar_record());
  CHECK(lenient.warnings().size() == 1);
}

TEST_CASE("right entries: absent obligations and closed grant enum") {
  ParseContext ctx(Strictness::strict);
  RightEntry e = right_entry_from_json(Json{{"grant", "Granted"}}, ctx, "Tagging");
  CHECK(e.grant == Grant::Granted);
  CHECK(e.obligations.empty());

  try {
    right_entry_from_json(Json{{"grant", "maybe"}}, ctx, "standalone_rights.Tagging");
    FAIL("expected ParseError");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ParseError);
    CHECK(std::string(err.what()).find("grant") != std::string::npos);
    CHECK(std::string(err.what()).find("Tagging") != std::string::npos);
  }
}

TEST_CASE("malformed JSON text is an IO-class error") {
  try {
    parse_json_text("{\"root\":", "truncated.json");
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::Io);
    CHECK(std::string(err.what()).find("truncated.json") != std::string::npos);
  }
}

TEST_CASE("capture status must agree with content") {
  ParseContext ctx(Strictness::strict);
  Json bad{{"source_id", "s"}, {"capture_year", nullptr}, {"capture_url", nullptr},
           {"content", "text"}, {"status", "unavailable"}};
  CHECK_THROWS_AS(capture_from_json(bad, ctx), Error);
}
