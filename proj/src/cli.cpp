#include "dla/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dla/assessment.hpp"
#include "dla/bundle.hpp"
#include "dla/catalog.hpp"
#include "dla/engine.hpp"
#include "dla/error.hpp"
#include "dla/lineage.hpp"
#include "dla/store.hpp"

#ifndef DLA_DEFAULT_DATA_DIR
#define DLA_DEFAULT_DATA_DIR ""
#endif

namespace dla::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string format = "markdown";
  std::string store;
  bool read_only_store = false;
  bool lenient = false;
  bool unknown_denies = false;
  bool audit_timestamps = false;
  std::string templates;
  std::string schema;

  std::vector<std::string> inputs;
  std::string interpretations;
  std::string scenarios;
  bool no_gate = false;
  std::string store_key;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::StoreCorrupt:
      return kExitIo;
    case ErrorCode::CycleDetected:
    case ErrorCode::DanglingReference:
    case ErrorCode::UnreachableNode:
    case ErrorCode::DuplicateSubject:
    case ErrorCode::MissingOriginYear:
    case ErrorCode::NoDatasetAncestor:
    case ErrorCode::AmbiguousRange:
      return kExitLineage;
    default:
      return kExitValidation;
  }
}

bool is_lineage_error(ErrorCode code) { return exit_code_for(code) == kExitLineage; }

class Session {
 public:
  Session(const Options& opts, std::ostream& out, std::ostream& err)
      : opts_(opts), out_(out), err_(err) {}

  ParseContext context() const {
    return ParseContext(opts_.lenient ? Strictness::lenient : Strictness::strict);
  }

  Policy policy() const { return Policy{opts_.unknown_denies}; }

  bool json() const { return opts_.format == "json"; }

  const Catalog& catalog() {
    if (!catalog_) {
      fs::path dir = opts_.templates;
      if (dir.empty()) {
        if (const char* env = std::getenv("DLA_TEMPLATES")) dir = env;
      }
      if (dir.empty()) dir = fs::path(DLA_DEFAULT_DATA_DIR) / "templates";
      Catalog c = Catalog::load_directory(dir);
      if (!opts_.schema.empty()) c = c.extend_schema(read_json_file(opts_.schema));
      catalog_ = std::move(c);
    }
    return *catalog_;
  }

  std::optional<AnalysisStore> store() const {
    std::string root = opts_.store;
    if (root.empty()) {
      if (const char* env = std::getenv("DLA_STORE")) root = env;
    }
    if (root.empty()) return std::nullopt;
    return AnalysisStore(root, opts_.read_only_store ? AnalysisStore::Mode::read_only
                                                     : AnalysisStore::Mode::read_write);
  }

  void flush_warnings(const ParseContext& ctx) {
    for (const auto& w : ctx.warnings()) err_ << "warning: " << w << "\n";
  }

  void emit_json(Json doc) {
    if (opts_.audit_timestamps) doc["generated_at"] = timestamp();
    out_ << canonical(doc);
  }

  std::string timestamp() const {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream s;
    s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
  }

  int validate();
  int lineage();
  int range();
  int verify();
  int assess();
  int store_ls();
  int store_rm();

 private:
  std::vector<std::string> validate_file(const fs::path& path);
  std::vector<std::string> validate_bundle(const fs::path& dir);
  VerifiedLicense verified_for(const Bundle& bundle);

  const Options& opts_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<Catalog> catalog_;
};

// ---------------------------------------------------------------------------
// validate

std::vector<std::string> report_lines(const ValidationReport& report, const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& v : report) out.push_back(prefix + v.field + ": " + v.rule);
  return out;
}

// Runs `fn`, turning non-IO library errors into violation lines.
template <typename Fn>
void collect(std::vector<std::string>& lines, Fn fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) throw;
    lines.push_back(e.what());
  }
}

std::vector<std::string> Session::validate_file(const fs::path& path) {
  Json j = read_json_file(path);
  std::vector<std::string> lines;
  ParseContext ctx = context();
  collect(lines, [&] {
    if (j.is_array()) {
      capture_list_from_json(j, ctx);
    } else if (!j.is_object()) {
      lines.push_back("unrecognised document: expected an object or array");
    } else if (j.contains("records")) {
      LineageDocument doc = lineage_document_from_json(j, ctx);
      for (const auto& r : doc.records) {
        auto more = report_lines(validate_provenance(r), r.subject_id + ".");
        lines.insert(lines.end(), more.begin(), more.end());
      }
      LineageGraph graph = build_lineage(std::move(doc));
      for (const auto& [id, _] : graph.nodes()) {
        collect(lines, [&] { compute_license_range(id, graph); });
      }
    } else if (j.contains("subject_kind")) {
      auto more = report_lines(validate_provenance(provenance_from_json(j, ctx)), "");
      lines.insert(lines.end(), more.begin(), more.end());
    } else if (j.contains("license_id")) {
      Catalog scratch;
      scratch.add_template(template_from_json(j, ctx));
    } else if (j.contains("subject_id")) {
      load_interpretation(j, catalog(), ctx);
    } else if (j.contains("standalone_rights") || j.contains("model_rights")) {
      auto more = report_lines(validate_rights_vector(rights_vector_from_json(j, ctx)), "");
      lines.insert(lines.end(), more.begin(), more.end());
    } else if (j.contains("scenarios")) {
      scenarios_from_json(j, ctx);
    } else if (j.contains("custom_rights")) {
      Catalog().extend_schema(j);
    } else if (j.contains("root_id")) {
      verified_from_json(j, ctx);
    } else {
      lines.push_back("unrecognised document type");
    }
  });
  flush_warnings(ctx);
  return lines;
}

std::vector<std::string> Session::validate_bundle(const fs::path& dir) {
  BundlePaths paths = resolve_bundle(dir);
  std::vector<std::string> lines = validate_file(paths.lineage);
  ParseContext ctx = context();

  std::optional<LineageGraph> graph;
  collect(lines, [&] { graph = build_lineage(load_lineage_document(paths.lineage, ctx)); });

  if (!fs::is_directory(paths.interpretations)) {
    throw Error(ErrorCode::Io, paths.interpretations.string() + ": interpretations directory not found");
  }
  std::map<SubjectId, std::optional<RightsVector>> seen;
  const std::size_t before_interpretations = lines.size();
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(paths.interpretations)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    Json j = read_json_file(file);
    collect(lines, [&] {
      try {
        Interpretation interp = load_interpretation(j, catalog(), ctx);
        if (!seen.emplace(interp.subject_id, interp.vector).second) {
          lines.push_back(file.string() + ": subject '" + interp.subject_id +
                          "' is interpreted twice");
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::Io) throw;
        throw Error(e.code(), file.string() + ": " + e.detail());
      }
    });
  }
  collect(lines, [&] { load_captures(paths.captures, ctx); });

  if (graph && lines.size() == before_interpretations) {
    collect(lines, [&] { dla::verify(*graph, seen, policy()); });
  }
  flush_warnings(ctx);
  std::vector<std::string> unique;
  for (auto& line : lines) {
    if (std::find(unique.begin(), unique.end(), line) == unique.end()) unique.push_back(std::move(line));
  }
  return unique;
}

int Session::validate() {
  int status = kExitOk;
  for (const auto& input : opts_.inputs) {
    std::vector<std::string> lines;
    try {
      lines = fs::is_directory(input) ? validate_bundle(input) : validate_file(input);
    } catch (const Error& e) {
      out_ << input << ": unreadable: " << e.detail() << "\n";
      status = kExitIo;
      continue;
    }
    if (lines.empty()) {
      out_ << input << ": OK\n";
      continue;
    }
    out_ << input << ": " << lines.size() << " violation(s)\n";
    for (std::string line : lines) {
      while (!line.empty() && line.back() == '\n') line.pop_back();
      for (std::size_t at = line.find('\n'); at != std::string::npos; at = line.find('\n', at + 5)) {
        line.replace(at, 1, "\n    ");
      }
      out_ << "  " << line << "\n";
    }
    if (status == kExitOk) status = kExitValidation;
  }
  return status;
}

// ---------------------------------------------------------------------------
// lineage / range

std::string range_text(const LicenseRange& r) {
  return std::to_string(r.start_year) + "-" + std::to_string(r.end_year);
}

int Session::range() {
  ParseContext ctx = context();
  LineageGraph graph = build_lineage(load_lineage_document(resolve_bundle(opts_.inputs.at(0)).lineage, ctx));
  flush_warnings(ctx);
  int status = kExitOk;
  Json ranges = Json::object();
  std::ostringstream text;
  for (const auto& [id, record] : graph.nodes()) {
    try {
      LicenseRange r = compute_license_range(id, graph);
      ranges[id] = to_json(r);
      text << id << " (" << record.dataset_name << "): " << range_text(r) << "\n";
    } catch (const Error& e) {
      if (!is_lineage_error(e.code())) throw;
      ranges[id] = Json{{"error", e.what()}};
      text << id << " (" << record.dataset_name << "): error: " << e.what() << "\n";
      status = kExitLineage;
    }
  }
  if (json()) {
    emit_json(Json{{"root", graph.root_id()}, {"ranges", ranges}});
  } else {
    out_ << text.str();
  }
  return status;
}

int Session::lineage() {
  ParseContext ctx = context();
  BundlePaths paths = resolve_bundle(opts_.inputs.at(0));
  LineageGraph graph = build_lineage(load_lineage_document(paths.lineage, ctx));
  auto captures = load_captures(paths.captures, ctx);
  const bool have_captures = fs::is_directory(paths.captures);
  flush_warnings(ctx);

  int status = kExitOk;
  Json ranges = Json::object();
  Json selected = Json::object();
  std::ostringstream text;
  text << "root: " << graph.root_id() << "\n";
  for (const auto& [id, record] : graph.nodes()) {
    text << "- " << id << " [" << to_string(record.subject_kind) << "] " << record.dataset_name;
    auto kids = graph.children(id);
    if (!kids.empty()) {
      text << " <- ";
      for (std::size_t i = 0; i < kids.size(); ++i) text << (i ? ", " : "") << kids[i];
    }
    text << "\n";
    try {
      LicenseRange r = compute_license_range(id, graph);
      ranges[id] = to_json(r);
      text << "    range " << range_text(r);
      if (have_captures) {
        auto it = captures.find(id);
        std::vector<CaptureInput> none;
        LicenseCapture c = select_capture(id, it == captures.end() ? none : it->second, r);
        selected[id] = to_json(c);
        text << "; capture " << to_string(c.status);
        if (c.capture_year) text << " " << *c.capture_year << " " << *c.capture_url;
      }
      text << "\n";
    } catch (const Error& e) {
      if (!is_lineage_error(e.code())) throw;
      ranges[id] = Json{{"error", e.what()}};
      text << "    error: " << e.what() << "\n";
      status = kExitLineage;
    }
  }
  if (json()) {
    Json doc{{"graph", to_json(graph)}, {"ranges", ranges}};
    if (have_captures) doc["captures"] = selected;
    emit_json(std::move(doc));
  } else {
    out_ << text.str();
  }
  return status;
}

// ---------------------------------------------------------------------------
// verify / assess

VerifiedLicense Session::verified_for(const Bundle& bundle) {
  InterpretationMap interps = bundle.interpretation_map();
  auto store = this->store();
  if (!store) return dla::verify(bundle.graph, interps, policy());
  LookupResult result = lookup_or_verify(*store, bundle.graph, interps, policy());
  for (const auto& w : result.warnings) err_ << "warning: " << w << "\n";
  err_ << "cache " << (result.cache_hit ? "hit" : "miss") << ": " << bundle.graph.root_id() << "\n";
  return std::move(result.verified);
}

int Session::verify() {
  ParseContext ctx = context();
  BundlePaths paths = resolve_bundle(opts_.inputs.at(0));
  if (!opts_.interpretations.empty()) paths.interpretations = opts_.interpretations;
  Bundle bundle = load_bundle(paths, catalog(), ctx);
  flush_warnings(ctx);
  VerifiedLicense verified = verified_for(bundle);
  if (json()) {
    emit_json(to_json(verified));
    return kExitOk;
  }
  const RightsVector& own = *bundle.interpretations.at(bundle.graph.root_id()).vector;
  out_ << "# Verified license: " << bundle.graph.root().dataset_name << "\n\n"
       << "| Right | Own license | Verified | Obligations | Restricted by |\n"
       << "| --- | --- | --- | --- | --- |\n";
  for (const auto& name : verified.rights.names()) {
    const RightEntry& e = *verified.rights.find(name);
    std::string obligations, restrictors;
    for (const auto& ob : e.obligations) obligations += (obligations.empty() ? "" : ", ") + ob.id;
    for (const auto& id : verified.restrictors_of(name)) restrictors += (restrictors.empty() ? "" : ", ") + id;
    bool changed = std::find(verified.changed.begin(), verified.changed.end(), name) != verified.changed.end();
    out_ << "| " << name << (changed ? " (changed)" : "") << " | " << to_string(own.rights.grant_of(name))
         << " | " << to_string(e.grant) << " | " << obligations << " | " << restrictors << " |\n";
  }
  if (!verified.residual_risk_flags.empty()) {
    out_ << "\nResidual risk, license content unavailable:";
    for (const auto& id : verified.residual_risk_flags) out_ << " " << id;
    out_ << "\n";
  }
  if (opts_.audit_timestamps) out_ << "\nGenerated at " << timestamp() << "\n";
  return kExitOk;
}

int Session::assess() {
  if (!opts_.interpretations.empty() && opts_.inputs.size() != 1) {
    throw Error(ErrorCode::SchemaViolation, "--interpretations applies to a single input only");
  }
  std::vector<UsageScenario> scenarios = default_scenarios();
  if (!opts_.scenarios.empty()) {
    ParseContext sctx = context();
    scenarios = scenarios_from_json(read_json_file(opts_.scenarios), sctx);
    flush_warnings(sctx);
  }

  std::vector<DatasetReport> reports;
  for (const auto& input : opts_.inputs) {
    ParseContext ctx = context();
    BundlePaths paths = resolve_bundle(input);
    if (!opts_.interpretations.empty()) paths.interpretations = opts_.interpretations;
    Bundle bundle = load_bundle(paths, catalog(), ctx);
    flush_warnings(ctx);
    DatasetReport report;
    report.verified = verified_for(bundle);
    report.own = *bundle.interpretations.at(bundle.graph.root_id()).vector;
    report.table = assess_all(report.verified, scenarios, bundle.graph.root().dataset_name);
    report.templates = bundle.template_refs();
    reports.push_back(std::move(report));
  }

  if (json()) {
    emit_json(reports_to_json(reports));
  } else {
    out_ << render_markdown(reports);
    if (opts_.audit_timestamps) out_ << "\nGenerated at " << timestamp() << "\n";
  }

  bool denied = false;
  for (const auto& r : reports) {
    for (const auto& row : r.table.rows) denied = denied || !row.permitted;
  }
  return denied && !opts_.no_gate ? kExitDenied : kExitOk;
}

// ---------------------------------------------------------------------------
// store

int Session::store_ls() {
  auto store = this->store();
  if (!store) throw Error(ErrorCode::Io, "no store configured (use --store or DLA_STORE)");
  auto entries = store->list();
  if (json()) {
    Json list = Json::array();
    for (const auto& e : entries) {
      list.push_back(Json{{"key", e.key}, {"root_id", e.root_id}, {"dataset_name", e.dataset_name},
                          {"blob_sha256", e.blob_sha256}});
    }
    emit_json(Json{{"entries", list}});
  } else {
    for (const auto& e : entries) out_ << e.key << "  " << e.root_id << "  " << e.dataset_name << "\n";
  }
  return kExitOk;
}

int Session::store_rm() {
  auto store = this->store();
  if (!store) throw Error(ErrorCode::Io, "no store configured (use --store or DLA_STORE)");
  if (!store->remove(opts_.store_key)) {
    err_ << "no store entry " << opts_.store_key << "\n";
    return kExitValidation;
  }
  out_ << "removed " << opts_.store_key << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opts;
  CLI::App app{"Dataset license compliance analysis"};
  app.name("dla");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--format", opts.format, "Output format")->check(CLI::IsMember({"json", "markdown"}));
  app.add_option("--store", opts.store, "Analysis store directory (default: $DLA_STORE)");
  app.add_flag("--read-only-store", opts.read_only_store, "Never write to the analysis store");
  auto* strict = app.add_flag("--strict", "Reject unknown document fields (default)");
  app.add_flag("--lenient", opts.lenient, "Warn about unknown document fields instead of failing")
      ->excludes(strict);
  app.add_flag("--unknown-denies", opts.unknown_denies, "Treat unavailable licenses as denying every right");
  app.add_flag("--audit-timestamps", opts.audit_timestamps, "Stamp reports with the generation time");
  app.add_option("--templates", opts.templates, "License template directory (default: $DLA_TEMPLATES)");
  app.add_option("--schema", opts.schema, "Schema extension document declaring custom rights");

  auto* validate = app.add_subcommand("validate", "Validate documents or bundle directories");
  validate->add_option("paths", opts.inputs)->required();

  auto* lineage = app.add_subcommand("lineage", "Show the lineage graph, license ranges and captures");
  lineage->add_option("input", opts.inputs, "Bundle directory or lineage file")->required()->expected(1);

  auto* range = app.add_subcommand("range", "Print the license range of every lineage node");
  range->add_option("input", opts.inputs, "Bundle directory or lineage file")->required()->expected(1);

  auto* verify = app.add_subcommand("verify", "Compute the verified license of a bundle");
  verify->add_option("input", opts.inputs, "Bundle directory or lineage file")->required()->expected(1);
  verify->add_option("--interpretations", opts.interpretations, "Interpretation directory");

  auto* assess = app.add_subcommand("assess", "Assess usage scenarios for one or more bundles");
  assess->add_option("inputs", opts.inputs, "Bundle directories or lineage files")->required();
  assess->add_option("--interpretations", opts.interpretations, "Interpretation directory");
  assess->add_option("--scenarios", opts.scenarios, "Scenario document (default: DD, RPEAI, CAI)");
  assess->add_flag("--no-gate", opts.no_gate, "Exit 0 even when a scenario is denied");

  auto* store = app.add_subcommand("store", "Inspect the analysis store");
  store->require_subcommand(1);
  auto* store_ls = store->add_subcommand("ls", "List stored analyses");
  auto* store_rm = store->add_subcommand("rm", "Remove a stored analysis");
  store_rm->add_option("key", opts.store_key)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dla: " << e.what() << "\n" << app.help();
    return kExitIo;
  }

  Session session(opts, out, err);
  try {
    if (*validate) return session.validate();
    if (*lineage) return session.lineage();
    if (*range) return session.range();
    if (*verify) return session.verify();
    if (*assess) return session.assess();
    if (*store_ls) return session.store_ls();
    if (*store_rm) return session.store_rm();
  } catch (const Error& e) {
    err << "dla: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "dla: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace dla::cli
