#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "dla/cli.hpp"
#include "testkit.hpp"

using namespace testkit;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  args.insert(args.begin(), {"--templates", templates_dir().string()});
  int status = dla::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string bundle(const char* name) { return fixture(name).string(); }

}  // namespace

TEST_CASE("validate") {
  std::vector<std::string> args = {"validate"};
  for (const char* name : {"cifar-10", "imagenet", "cityscapes", "ffhq", "vggface2", "ms-coco", "ms-coco-annotations"}) {
    args.push_back(bundle(name));
  }
  Outcome ok = run(args);
  CHECK(ok.status == 0);

  TempDir dir;
  write_file(dir.path() / "truncated.json", "{\"root\": \"a\", \"records\": [");
  Outcome io = run({"validate", (dir.path() / "truncated.json").string()});
  CHECK(io.status == 64);
  CHECK(io.out.find("truncated.json") != std::string::npos);

  Outcome bad = run({"validate", bundle("malformed-vector")});
  CHECK(bad.status == 1);
  CHECK(bad.out.find("ModelReverseEngineer") != std::string::npos);

  Outcome single = run({"validate", (fixture("cifar-10") / "interpretations" / "google.json").string(),
                        (fixture("cifar-10") / "captures" / "google.json").string(),
                        (templates_dir() / "CC-BY-4.0.json").string()});
  CHECK(single.status == 0);
}

TEST_CASE("range") {
  Outcome r = run({"range", bundle("cifar-10")});
  CHECK(r.status == 0);
  CHECK(r.out.find("cifar-10 (CIFAR-10): 2008-2009") != std::string::npos);
  CHECK(r.out.find("80m-tiny-images (80 Million Tiny Images): 2005-2006") != std::string::npos);
  CHECK(r.out.find("cydral (Cydral): 2005-2006") != std::string::npos);

  TempDir dir;
  write_file(dir.path() / "lineage.json",
             R"({"root": "x", "records": [{"subject_id": "x", "subject_kind": "dataset", "dataset_name": "X",
                 "origin_year": 2015, "license_found_via": "official_website"}], "edges": []})");
  Outcome single = run({"range", (dir.path() / "lineage.json").string()});
  CHECK(single.status == 0);
  CHECK(single.out == "x (X): 2014-2015\n");

  CHECK(run({"range", bundle("cyclic")}).status == 2);
}

TEST_CASE("assess exit codes") {
  CHECK(run({"assess", bundle("cifar-10")}).status == 3);
  CHECK(run({"assess", "--no-gate", bundle("cifar-10")}).status == 0);
  CHECK(run({"assess", bundle("synthetic-permissive")}).status == 0);
  CHECK(run({"assess", bundle("cyclic")}).status == 2);
  CHECK(run({"assess", bundle("malformed-vector")}).status == 1);
  CHECK(run({"assess", "/nonexistent/bundle"}).status == 64);
  CHECK(run({"frobnicate"}).status == 64);

  Outcome ffhq = run({"assess", bundle("ffhq")});
  CHECK(ffhq.status == 3);
  CHECK(ffhq.out.find("| FFHQ | Yes(C+D) | No | No |") != std::string::npos);
}

TEST_CASE("JSON output is byte-identical across runs and cache states") {
  TempDir dir;
  std::string store = (dir.path() / "store").string();
  Outcome plain = run({"--format", "json", "assess", bundle("cifar-10")});
  Outcome miss = run({"--format", "json", "--store", store, "assess", bundle("cifar-10")});
  Outcome hit = run({"--format", "json", "--store", store, "assess", bundle("cifar-10")});
  CHECK(plain.out == miss.out);
  CHECK(miss.out == hit.out);
  CHECK(miss.err.find("cache miss") != std::string::npos);
  CHECK(hit.err.find("cache hit") != std::string::npos);

  Outcome ls = run({"--store", store, "store", "ls"});
  CHECK(ls.status == 0);
  CHECK(ls.out.find("02a5f2e6ef60224ce4b52c5195fdf658effa8f1bc9c7c3745d39c51461278c9b") != std::string::npos);
  CHECK(run({"--store", store, "store", "rm", "02a5f2e6ef60224ce4b52c5195fdf658effa8f1bc9c7c3745d39c51461278c9b"}).status == 0);
  CHECK(run({"--store", store, "store", "ls"}).out.empty());

  Outcome stamped = run({"--format", "json", "--audit-timestamps", "verify", bundle("cifar-10")});
  CHECK(stamped.out.find("generated_at") != std::string::npos);
  CHECK(run({"--format", "json", "verify", bundle("cifar-10")}).out.find("generated_at") == std::string::npos);
}

TEST_CASE("lineage, verify and custom scenarios") {
  Outcome l = run({"--format", "json", "lineage", bundle("cifar-10")});
  CHECK(l.status == 0);
  dla::Json j = dla::Json::parse(l.out);
  CHECK(j["captures"]["ask"]["status"] == "out_of_range_fallback");
  CHECK(j["captures"]["webshots"]["status"] == "out_of_range_fallback");
  CHECK(j["captures"]["google"]["status"] == "in_range");
  CHECK(j["captures"]["cydral"]["status"] == "unavailable");
  CHECK(j["captures"]["80m-tiny-images"]["status"] == "unavailable");

  Outcome v = run({"verify", bundle("cifar-10")});
  CHECK(v.status == 0);
  CHECK(v.out.find("Tagging (changed)") != std::string::npos);

  TempDir dir;
  write_file(dir.path() / "scenarios.json",
             R"({"scenarios": [{"id": "research", "required_rights": ["Research", "Benchmark"]}]})");
  Outcome custom = run({"assess", "--scenarios", (dir.path() / "scenarios.json").string(), bundle("cifar-10")});
  CHECK(custom.status == 0);
  CHECK(custom.out.find("| CIFAR-10 | Yes(cite-cifar10) |") != std::string::npos);

  Outcome strict_unknown = run({"--unknown-denies", "--format", "json", "verify", bundle("vggface2")});
  CHECK(strict_unknown.out.find("\"unknown_denies\": true") != std::string::npos);
}

TEST_CASE("schema extension flag") {
  TempDir dir;
  write_file(dir.path() / "schema.json",
             R"({"custom_rights": [{"name": "AdversarialModelTraining", "applies_to": "model"}]})");
  std::string schema = (dir.path() / "schema.json").string();
  CHECK(run({"--schema", schema, "verify", bundle("ffhq")}).status == 1);
  Outcome lenient = run({"--lenient", "--schema", schema, "verify", bundle("ffhq")});
  CHECK(lenient.status == 0);
  CHECK(lenient.err.find("AdversarialModelTraining") != std::string::npos);
}
