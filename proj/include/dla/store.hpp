#pragma once

// Content-addressed store of completed analyses.
//
// Layout under the store root:
//   index.json           {"format": "dla-store/1", "entries": {key: {...}}}
//   blobs/<key>.json     canonical VerifiedLicense document
//   .lock                held exclusively by the single writer
//
// Blobs and the index are written to a temporary file and renamed into
// place, so readers never observe a partial document.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dla/engine.hpp"
#include "dla/model.hpp"

namespace dla {

// sha256 over the text
//   "dla-analysis-key/1\n"
//   "name=<dataset_name>\n"
//   "version=<dataset_version or empty>\n"
//   "digest=<ALGORITHM upper>:<hex lower>\n"   (or "digest=\n")
//   "policy=<policy flags>\n"
std::string analysis_key(const ProvenanceRecord& record, const Policy& policy);

struct StoreEntry {
  std::string key;
  std::string blob_sha256;
  SubjectId root_id;
  std::string dataset_name;

  bool operator==(const StoreEntry&) const = default;
};

class AnalysisStore {
 public:
  enum class Mode { read_write, read_only };

  // A read-write store creates its directory on demand. A read-only store
  // over a missing directory behaves as empty.
  AnalysisStore(std::filesystem::path root, Mode mode);

  const std::filesystem::path& root() const noexcept { return root_; }
  Mode mode() const noexcept { return mode_; }
  bool writable() const noexcept { return mode_ == Mode::read_write; }

  std::vector<StoreEntry> list() const;
  std::optional<StoreEntry> entry(const std::string& key) const;

  // Throws StoreCorrupt when the blob is missing, its digest differs from the
  // index, or it does not parse.
  std::optional<VerifiedLicense> load(const std::string& key) const;

  void persist(const std::string& key, const VerifiedLicense& verified, const std::string& dataset_name);
  bool remove(const std::string& key);

  std::filesystem::path index_path() const { return root_ / "index.json"; }
  std::filesystem::path blob_path(const std::string& key) const { return root_ / "blobs" / (key + ".json"); }

 private:

  std::filesystem::path root_;
  Mode mode_;
};

struct LookupResult {
  VerifiedLicense verified;
  bool cache_hit = false;
  std::vector<std::string> warnings;
};

// Returns the stored analysis when its audit matches the current inputs;
// otherwise runs verify(), persists the result when the store is writable,
// and reports StaleEntry / read-only warnings.
LookupResult lookup_or_verify(AnalysisStore& store, const LineageGraph& graph,
                              const InterpretationMap& interpretations, const Policy& policy);

}  // namespace dla
