#pragma once

// On-disk analysis bundle:
//   <bundle>/lineage.json             {"root", "records", "edges"}
//   <bundle>/interpretations/*.json   one interpretation document per subject
//   <bundle>/captures/<subject>.json  optional [{year, url, content}, ...]

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dla/catalog.hpp"
#include "dla/engine.hpp"
#include "dla/lineage.hpp"

namespace dla {

struct BundlePaths {
  std::filesystem::path lineage;
  std::filesystem::path interpretations;
  std::filesystem::path captures;
};

// Accepts a bundle directory or a lineage file; sibling directories default
// to interpretations/ and captures/ next to the lineage file.
BundlePaths resolve_bundle(const std::filesystem::path& input);

LineageDocument load_lineage_document(const std::filesystem::path& path, ParseContext& ctx);

// Interpretations keyed by subject id. Throws DuplicateSubject when two files
// interpret the same subject.
std::map<SubjectId, Interpretation> load_interpretations(const std::filesystem::path& dir,
                                                         const Catalog& catalog, ParseContext& ctx);

// Capture lists keyed by the file stem; an absent directory yields none.
std::map<SubjectId, std::vector<CaptureInput>> load_captures(const std::filesystem::path& dir,
                                                             ParseContext& ctx);

struct Bundle {
  LineageGraph graph;
  std::map<SubjectId, Interpretation> interpretations;
  std::map<SubjectId, std::vector<CaptureInput>> captures;

  InterpretationMap interpretation_map() const;
  std::vector<std::pair<SubjectId, TemplateRef>> template_refs() const;
};

Bundle load_bundle(const BundlePaths& paths, const Catalog& catalog, ParseContext& ctx);

}  // namespace dla
