#pragma once

// Lineage graph of a dataset and its data sources, license ranges, and
// selection of the archived license capture that governs each source.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dla/json_codec.hpp"
#include "dla/model.hpp"

namespace dla {

// parent collected data FROM child.
struct Edge {
  SubjectId parent;
  SubjectId child;

  auto operator<=>(const Edge&) const = default;
};

// Validated, acyclic, rooted lineage. Nodes and edges are held in
// lexicographic order, so two graphs built from permuted inputs compare equal.
class LineageGraph {
 public:
  const std::map<SubjectId, ProvenanceRecord>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const SubjectId& root_id() const noexcept { return root_id_; }

  bool contains(const SubjectId& id) const { return nodes_.contains(id); }
  const ProvenanceRecord& node(const SubjectId& id) const;
  const ProvenanceRecord& root() const { return node(root_id_); }
  std::vector<SubjectId> children(const SubjectId& id) const;
  std::vector<SubjectId> parents(const SubjectId& id) const;

  bool operator==(const LineageGraph& other) const;

 private:
  friend LineageGraph build_lineage(std::vector<ProvenanceRecord>, std::vector<Edge>, SubjectId);

  std::map<SubjectId, ProvenanceRecord> nodes_;
  std::vector<Edge> edges_;
  SubjectId root_id_;
};

// Throws DuplicateSubject, DanglingReference, CycleDetected or UnreachableNode.
LineageGraph build_lineage(std::vector<ProvenanceRecord> records, std::vector<Edge> edges,
                           SubjectId root);

// Datasets use [origin_year - 1, origin_year]. Websites and search engines
// inherit the range of their nearest dataset ancestor.
LicenseRange compute_license_range(const SubjectId& node_id, const LineageGraph& graph);

// Earliest capture inside the range; failing that the earliest capture at
// all; failing that an unavailable capture. Captures without content do not
// count. Same-year ties go to the smallest url.
LicenseCapture select_capture(const SubjectId& source_id, std::span<const CaptureInput> captures,
                              const LicenseRange& range);

struct LineageDocument {
  std::vector<ProvenanceRecord> records;
  std::vector<Edge> edges;
  SubjectId root;
};

LineageDocument lineage_document_from_json(const Json& j, ParseContext& ctx);
Json to_json(const LineageGraph& graph);
LineageGraph build_lineage(LineageDocument document);

// sha256 of the canonical graph document.
std::string lineage_digest(const LineageGraph& graph);

}  // namespace dla
