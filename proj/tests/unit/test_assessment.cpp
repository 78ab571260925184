#include "doctest.h"
#include "dla/assessment.hpp"
#include "dla/bundle.hpp"
#include "dla/error.hpp"
#include "testkit.hpp"

using namespace dla;
using namespace testkit;

namespace {

VerifiedLicense verified(const std::string& name) {
  static const Catalog catalog = Catalog::load_directory(templates_dir());
  ParseContext ctx(Strictness::strict);
  Bundle b = load_bundle(resolve_bundle(fixture(name)), catalog, ctx);
  return verify(b.graph, b.interpretation_map());
}

ErrorCode code_of(auto fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("default scenarios") {
  auto s = default_scenarios();
  REQUIRE(s.size() == 3);
  CHECK(s[0].id == "DD");
  CHECK(s[0].required_rights == std::vector<std::string>{"Distribute"});
  CHECK(s[1].id == "RPEAI");
  CHECK(s[1].required_rights == std::vector<std::string>{"CommercializeModel"});
  CHECK(s[2].id == "CAI");
  CHECK(s[2].required_rights == std::vector<std::string>{"CommercializeOutput"});

  ParseContext ctx(Strictness::strict);
  CHECK(scenarios_from_json(read_json_file(source_dir() / "data" / "scenarios.json"), ctx) == s);
}

TEST_CASE("assess examples") {
  AssessmentRow cifar = assess(verified("cifar-10"), default_scenarios()[1]);
  CHECK_FALSE(cifar.permitted);
  REQUIRE(cifar.blocking_rights.size() == 1);
  CHECK(cifar.blocking_rights[0].right == "CommercializeModel");
  CHECK_FALSE(cifar.blocking_rights[0].restrictors.empty());

  AssessmentRow ffhq = assess(verified("ffhq"), default_scenarios()[0]);
  CHECK(ffhq.permitted);
  CHECK(ffhq.obligations == std::vector<std::string>{"C", "D"});
  CHECK(ffhq.blocking_rights.empty());
  CHECK(cell_text(ffhq) == "Yes(C+D)");
  CHECK(cell_text(cifar) == "No");
}

TEST_CASE("scenario construction and errors") {
  CHECK(code_of([] { make_scenario("X", {}); }) == ErrorCode::SchemaViolation);
  CHECK(code_of([] { make_scenario("", {"Distribute"}); }) == ErrorCode::SchemaViolation);
  VerifiedLicense v = verified("ffhq");
  CHECK(code_of([&] { assess(v, make_scenario("X", {"Teleport"})); }) == ErrorCode::UnknownRight);
  auto dup = std::vector<UsageScenario>{default_scenarios()[0], default_scenarios()[0]};
  CHECK(code_of([&] { assess_all(v, dup); }) == ErrorCode::DuplicateScenario);

  ParseContext ctx(Strictness::strict);
  Json doc{{"scenarios", Json::array({to_json(default_scenarios()[0]), to_json(default_scenarios()[0])})}};
  CHECK(code_of([&] { scenarios_from_json(doc, ctx); }) == ErrorCode::DuplicateScenario);
}

TEST_CASE("multi-right and custom scenarios") {
  VerifiedLicense v = verified("ms-coco-annotations");
  AssessmentRow both = assess(v, make_scenario("ship", {"Distribute", "CommercializeModel"}));
  CHECK(both.permitted);
  CHECK(both.obligations == std::vector<std::string>{"B", "E", "D"});
  AssessmentRow one = assess(v, make_scenario("cai", {"CommercializeOutput"}));
  CHECK(one.obligations == std::vector<std::string>{"B"});
  CHECK(one.other_obligations == std::vector<std::string>{"E", "D"});
}

TEST_CASE("assessment properties on random verified licenses") {
  Rng rng(61);
  std::vector<std::string> names = fixed_right_names();
  for (int i = 0; i < 400; ++i) {
    RandomCase c = random_case(rng);
    VerifiedLicense v = verify(graph_of(c), c.interpretations);
    std::vector<UsageScenario> scenarios;
    int n = pick(rng, 1, 5);
    for (int k = 0; k < n; ++k) {
      std::vector<std::string> rights = names;
      std::shuffle(rights.begin(), rights.end(), rng);
      rights.resize(pick(rng, 1, 3));
      scenarios.push_back(make_scenario("s" + std::to_string(k), rights));
    }
    AssessmentTable table = assess_all(v, scenarios);
    REQUIRE(table.rows.size() == scenarios.size());

    std::set<std::string> all_ids;
    for (const auto& right : v.rights.names()) {
      for (const auto& ob : v.rights.find(right)->obligations) all_ids.insert(ob.id);
    }
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
      const AssessmentRow& row = table.rows[k];
      CHECK(row.scenario_id == scenarios[k].id);
      CHECK(row.permitted == row.blocking_rights.empty());
      for (const auto& id : row.obligations) CHECK(all_ids.contains(id));

      // Antitone: denying one more right never turns No into Yes.
      VerifiedLicense stricter = v;
      std::string victim = names[pick(rng, 0, static_cast<int>(names.size()) - 1)];
      stricter.rights.find(victim)->grant = Grant::Denied;
      AssessmentRow after = assess(stricter, scenarios[k]);
      if (!row.permitted) CHECK_FALSE(after.permitted);
    }
  }
}

TEST_CASE("report rendering") {
  std::vector<DatasetReport> reports;
  for (const char* name : {"cifar-10", "ffhq"}) {
    static const Catalog catalog = Catalog::load_directory(templates_dir());
    ParseContext ctx(Strictness::strict);
    Bundle b = load_bundle(resolve_bundle(fixture(name)), catalog, ctx);
    DatasetReport r;
    r.verified = verify(b.graph, b.interpretation_map());
    r.own = *b.interpretations.at(b.graph.root_id()).vector;
    r.table = assess_all(r.verified, default_scenarios(), b.graph.root().dataset_name);
    r.templates = b.template_refs();
    reports.push_back(r);
  }
  std::string md = render_markdown(reports);
  CHECK(md.find("| Dataset | DD | RPEAI | CAI |") != std::string::npos);
  CHECK(md.find("| CIFAR-10 | No | No | No |") != std::string::npos);
  CHECK(md.find("| FFHQ | Yes(C+D) | No | No |") != std::string::npos);
  CHECK(md.find("- C: Provide a link to license CC-By-NC-SA 4.0") != std::string::npos);
  CHECK(md.find("Residual risk") != std::string::npos);
  CHECK(md == render_markdown(reports));

  ParseContext ctx(Strictness::strict);
  Json j = reports_to_json(reports);
  CHECK(j["reports"].size() == 2);
  AssessmentTable back = assessment_from_json(j["reports"][1]["assessment"], ctx);
  CHECK(back == reports[1].table);
}
