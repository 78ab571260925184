#include "dla/lineage.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

#include "dla/digest.hpp"
#include "dla/error.hpp"

namespace dla {

const ProvenanceRecord& LineageGraph::node(const SubjectId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::DanglingReference, "no lineage node '" + id + "'");
  return it->second;
}

std::vector<SubjectId> LineageGraph::children(const SubjectId& id) const {
  std::vector<SubjectId> out;
  for (const auto& e : edges_) {
    if (e.parent == id) out.push_back(e.child);
  }
  return out;
}

std::vector<SubjectId> LineageGraph::parents(const SubjectId& id) const {
  std::vector<SubjectId> out;
  for (const auto& e : edges_) {
    if (e.child == id) out.push_back(e.parent);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool LineageGraph::operator==(const LineageGraph& other) const {
  return root_id_ == other.root_id_ && nodes_ == other.nodes_ && edges_ == other.edges_;
}

namespace {

// Returns one cycle as a closed path, or empty if the graph is acyclic.
std::vector<SubjectId> find_cycle(const std::map<SubjectId, std::vector<SubjectId>>& adjacency) {
  enum class Colour { white, grey, black };
  std::map<SubjectId, Colour> colour;
  for (const auto& [id, _] : adjacency) colour[id] = Colour::white;

  for (const auto& [start, _] : adjacency) {
    if (colour[start] != Colour::white) continue;
    // Explicit stack of (node, next child index) keeps deep chains off the
    // call stack.
    std::vector<std::pair<SubjectId, std::size_t>> stack{{start, 0}};
    colour[start] = Colour::grey;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& kids = adjacency.at(node);
      if (next == kids.size()) {
        colour[node] = Colour::black;
        stack.pop_back();
        continue;
      }
      const SubjectId child = kids[next++];
      if (colour[child] == Colour::grey) {
        std::vector<SubjectId> cycle;
        auto it = std::find_if(stack.begin(), stack.end(),
                               [&](const auto& frame) { return frame.first == child; });
        for (; it != stack.end(); ++it) cycle.push_back(it->first);
        cycle.push_back(child);
        return cycle;
      }
      if (colour[child] == Colour::white) {
        colour[child] = Colour::grey;
        stack.emplace_back(child, 0);
      }
    }
  }
  return {};
}

std::string join(const std::vector<SubjectId>& ids, std::string_view sep) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += sep;
    out += id;
  }
  return out;
}

}  // namespace

LineageGraph build_lineage(std::vector<ProvenanceRecord> records, std::vector<Edge> edges,
                           SubjectId root) {
  LineageGraph graph;
  for (auto& record : records) {
    SubjectId id = record.subject_id;
    if (!graph.nodes_.emplace(id, std::move(record)).second) {
      throw Error(ErrorCode::DuplicateSubject, "subject id '" + id + "' appears more than once");
    }
  }
  if (!graph.nodes_.contains(root)) {
    throw Error(ErrorCode::DanglingReference, "root '" + root + "' is not among the records");
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::map<SubjectId, std::vector<SubjectId>> adjacency;
  for (const auto& [id, _] : graph.nodes_) adjacency[id];
  for (const auto& e : edges) {
    for (const auto* end : {&e.parent, &e.child}) {
      if (!graph.nodes_.contains(*end)) {
        throw Error(ErrorCode::DanglingReference,
                    "edge " + e.parent + " -> " + e.child + " references missing id '" + *end + "'");
      }
    }
    adjacency[e.parent].push_back(e.child);
  }

  if (auto cycle = find_cycle(adjacency); !cycle.empty()) {
    throw Error(ErrorCode::CycleDetected, join(cycle, " -> "));
  }

  std::set<SubjectId> reached{root};
  std::deque<SubjectId> queue{root};
  while (!queue.empty()) {
    SubjectId id = std::move(queue.front());
    queue.pop_front();
    for (const auto& child : adjacency[id]) {
      if (reached.insert(child).second) queue.push_back(child);
    }
  }
  for (const auto& [id, _] : graph.nodes_) {
    if (!reached.contains(id)) {
      throw Error(ErrorCode::UnreachableNode, "'" + id + "' is not reachable from root '" + root + "'");
    }
  }

  graph.edges_ = std::move(edges);
  graph.root_id_ = std::move(root);
  return graph;
}

LicenseRange compute_license_range(const SubjectId& node_id, const LineageGraph& graph) {
  auto dataset_range = [&](const ProvenanceRecord& record) {
    if (!record.origin_year) {
      throw Error(ErrorCode::MissingOriginYear,
                  "dataset '" + record.subject_id + "' has no origin_year");
    }
    return LicenseRange::ending_at(*record.origin_year);
  };

  const ProvenanceRecord& record = graph.node(node_id);
  if (record.subject_kind == SubjectKind::dataset) return dataset_range(record);

  // Breadth-first up the parent edges, one depth level at a time, stopping at
  // the first level that contains a dataset.
  std::set<SubjectId> visited{node_id};
  std::vector<SubjectId> frontier{node_id};
  while (!frontier.empty()) {
    std::vector<SubjectId> next;
    std::vector<const ProvenanceRecord*> datasets;
    for (const auto& id : frontier) {
      for (const auto& parent : graph.parents(id)) {
        if (!visited.insert(parent).second) continue;
        const auto& p = graph.node(parent);
        if (p.subject_kind == SubjectKind::dataset) {
          datasets.push_back(&p);
        } else {
          next.push_back(parent);
        }
      }
    }
    if (!datasets.empty()) {
      LicenseRange range = dataset_range(*datasets.front());
      for (const auto* d : datasets) {
        if (dataset_range(*d) != range) {
          throw Error(ErrorCode::AmbiguousRange,
                      "'" + node_id + "' has nearest dataset ancestors '" +
                          datasets.front()->subject_id + "' and '" + d->subject_id +
                          "' with different license ranges");
        }
      }
      return range;
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  throw Error(ErrorCode::NoDatasetAncestor, "'" + node_id + "' has no dataset ancestor");
}

LicenseCapture select_capture(const SubjectId& source_id, std::span<const CaptureInput> captures,
                              const LicenseRange& range) {
  auto earlier = [](const CaptureInput* a, const CaptureInput* b) {
    return std::tie(a->year, a->url) < std::tie(b->year, b->url);
  };
  const CaptureInput* best_in_range = nullptr;
  const CaptureInput* best_overall = nullptr;
  for (const auto& c : captures) {
    if (!c.content) continue;
    if (!best_overall || earlier(&c, best_overall)) best_overall = &c;
    if (range.contains(c.year) && (!best_in_range || earlier(&c, best_in_range))) best_in_range = &c;
  }

  LicenseCapture out;
  out.source_id = source_id;
  const CaptureInput* chosen = best_in_range ? best_in_range : best_overall;
  if (!chosen) return out;
  out.capture_year = chosen->year;
  out.capture_url = chosen->url;
  out.content = chosen->content;
  out.status = best_in_range ? CaptureStatus::in_range : CaptureStatus::out_of_range_fallback;
  return out;
}

LineageDocument lineage_document_from_json(const Json& j, ParseContext& ctx) {
  ObjectReader in(j, "lineage", ctx);
  LineageDocument doc;
  doc.root = in.string("root");
  const Json& records = in.require("records");
  if (!records.is_array()) in.fail("records", "expected an array");
  for (const auto& r : records) doc.records.push_back(provenance_from_json(r, ctx));
  if (const Json* edges = in.get("edges")) {
    if (!edges->is_array()) in.fail("edges", "expected an array");
    for (const auto& e : *edges) {
      ObjectReader ein(e, "lineage.edge", ctx);
      doc.edges.push_back({ein.string("parent"), ein.string("child")});
      ein.finish();
    }
  }
  in.finish();
  return doc;
}

Json to_json(const LineageGraph& graph) {
  Json records = Json::array();
  for (const auto& [_, record] : graph.nodes()) records.push_back(to_json(record));
  Json edges = Json::array();
  for (const auto& e : graph.edges()) edges.push_back(Json{{"parent", e.parent}, {"child", e.child}});
  return Json{{"root", graph.root_id()}, {"records", records}, {"edges", edges}};
}

LineageGraph build_lineage(LineageDocument document) {
  return build_lineage(std::move(document.records), std::move(document.edges), std::move(document.root));
}

std::string lineage_digest(const LineageGraph& graph) { return sha256_hex(canonical(to_json(graph))); }

}  // namespace dla
