#include "dla/bundle.hpp"

#include <algorithm>

#include "dla/error.hpp"

namespace dla {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> json_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Prefixes parse-level failures with the file they came from.
template <typename Fn>
auto in_file(const fs::path& file, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) throw;
    throw Error(e.code(), file.string() + ": " + e.detail());
  }
}

}  // namespace

BundlePaths resolve_bundle(const fs::path& input) {
  BundlePaths paths;
  fs::path dir;
  if (fs::is_directory(input)) {
    dir = input;
    paths.lineage = input / "lineage.json";
  } else {
    dir = input.parent_path();
    paths.lineage = input;
  }
  paths.interpretations = dir / "interpretations";
  paths.captures = dir / "captures";
  return paths;
}

LineageDocument load_lineage_document(const fs::path& path, ParseContext& ctx) {
  Json j = read_json_file(path);
  return in_file(path, [&] { return lineage_document_from_json(j, ctx); });
}

std::map<SubjectId, Interpretation> load_interpretations(const fs::path& dir, const Catalog& catalog,
                                                         ParseContext& ctx) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + ": interpretations directory not found");
  std::map<SubjectId, Interpretation> out;
  for (const auto& file : json_files(dir)) {
    Json j = read_json_file(file);
    Interpretation interp = in_file(file, [&] { return load_interpretation(j, catalog, ctx); });
    SubjectId id = interp.subject_id;
    if (!out.emplace(id, std::move(interp)).second) {
      throw Error(ErrorCode::DuplicateSubject, file.string() + ": subject '" + id + "' is interpreted twice");
    }
  }
  return out;
}

std::map<SubjectId, std::vector<CaptureInput>> load_captures(const fs::path& dir, ParseContext& ctx) {
  std::map<SubjectId, std::vector<CaptureInput>> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& file : json_files(dir)) {
    Json j = read_json_file(file);
    out[file.stem().string()] = in_file(file, [&] { return capture_list_from_json(j, ctx); });
  }
  return out;
}

InterpretationMap Bundle::interpretation_map() const {
  InterpretationMap out;
  for (const auto& [id, interp] : interpretations) out.emplace(id, interp.vector);
  return out;
}

std::vector<std::pair<SubjectId, TemplateRef>> Bundle::template_refs() const {
  std::vector<std::pair<SubjectId, TemplateRef>> out;
  for (const auto& [id, interp] : interpretations) {
    if (interp.template_ref) out.emplace_back(id, *interp.template_ref);
  }
  return out;
}

Bundle load_bundle(const BundlePaths& paths, const Catalog& catalog, ParseContext& ctx) {
  Bundle bundle{build_lineage(load_lineage_document(paths.lineage, ctx)), {}, {}};
  bundle.interpretations = load_interpretations(paths.interpretations, catalog, ctx);
  bundle.captures = load_captures(paths.captures, ctx);
  for (const auto& [id, _] : bundle.interpretations) {
    if (!bundle.graph.contains(id)) ctx.warn("interpretation for '" + id + "' is not part of the lineage");
  }
  return bundle;
}

}  // namespace dla
