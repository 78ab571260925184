#include "dla/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <fstream>

#include "dla/digest.hpp"
#include "dla/error.hpp"
#include "dla/json_codec.hpp"

namespace dla {

namespace fs = std::filesystem;

std::string analysis_key(const ProvenanceRecord& record, const Policy& policy) {
  std::string text = "dla-analysis-key/1\n";
  text += "name=" + record.dataset_name + "\n";
  text += "version=" + record.dataset_version.value_or("") + "\n";
  text += "digest=";
  if (record.digest) {
    for (char c : record.digest->algorithm) text.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    text += ":";
    for (char c : record.digest->hex) text.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  text += "\npolicy=" + policy.flags() + "\n";
  return sha256_hex(text);
}

namespace {

constexpr std::string_view kFormat = "dla-store/1";

class WriterLock {
 public:
  explicit WriterLock(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
      if (fd_ >= 0) ::close(fd_);
      throw Error(ErrorCode::Io, path.string() + ": cannot acquire store lock");
    }
  }
  ~WriterLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  WriterLock(const WriterLock&) = delete;
  WriterLock& operator=(const WriterLock&) = delete;

 private:
  int fd_ = -1;
};

void write_atomically(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, tmp.string() + ": cannot create file");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, tmp.string() + ": write failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, target.string() + ": rename failed");
  }
}

Json read_index(const fs::path& path) {
  if (!fs::exists(path)) return Json{{"format", kFormat}, {"entries", Json::object()}};
  Json index;
  try {
    index = read_json_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::StoreCorrupt, e.detail());
  }
  if (!index.is_object() || index.value("format", "") != kFormat || !index.contains("entries") ||
      !index["entries"].is_object()) {
    throw Error(ErrorCode::StoreCorrupt, path.string() + ": not a " + std::string(kFormat) + " index");
  }
  return index;
}

StoreEntry entry_from(const std::string& key, const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::StoreCorrupt, "index entry " + key + " is not an object");
  return {key, j.value("blob_sha256", ""), j.value("root_id", ""), j.value("dataset_name", "")};
}

}  // namespace

AnalysisStore::AnalysisStore(fs::path root, Mode mode) : root_(std::move(root)), mode_(mode) {
  if (mode_ == Mode::read_write) {
    std::error_code ec;
    fs::create_directories(root_ / "blobs", ec);
    if (ec) throw Error(ErrorCode::Io, root_.string() + ": cannot create store directory");
  }
}

std::vector<StoreEntry> AnalysisStore::list() const {
  std::vector<StoreEntry> out;
  Json index = read_index(index_path());
  for (const auto& [key, value] : index["entries"].items()) out.push_back(entry_from(key, value));
  return out;
}

std::optional<StoreEntry> AnalysisStore::entry(const std::string& key) const {
  Json index = read_index(index_path());
  const Json& entries = index["entries"];
  if (!entries.contains(key)) return std::nullopt;
  return entry_from(key, entries[key]);
}

std::optional<VerifiedLicense> AnalysisStore::load(const std::string& key) const {
  auto e = entry(key);
  if (!e) return std::nullopt;
  std::string blob;
  try {
    blob = read_text_file(blob_path(key));
  } catch (const Error&) {
    throw Error(ErrorCode::StoreCorrupt, "blob for " + key + " is missing");
  }
  if (sha256_hex(blob) != e->blob_sha256) {
    throw Error(ErrorCode::StoreCorrupt, "blob for " + key + " does not match its index digest");
  }
  try {
    ParseContext ctx(Strictness::strict);
    return verified_from_json(parse_json_text(blob, blob_path(key).string()), ctx);
  } catch (const Error& err) {
    throw Error(ErrorCode::StoreCorrupt, "blob for " + key + ": " + err.detail());
  }
}

void AnalysisStore::persist(const std::string& key, const VerifiedLicense& verified,
                            const std::string& dataset_name) {
  if (!writable()) throw Error(ErrorCode::Io, root_.string() + ": store is read-only");
  WriterLock lock(root_ / ".lock");
  const std::string blob = canonical(to_json(verified));
  write_atomically(blob_path(key), blob);
  Json index = read_index(index_path());
  index["entries"][key] = Json{{"blob_sha256", sha256_hex(blob)},
                               {"root_id", verified.root_id},
                               {"dataset_name", dataset_name}};
  write_atomically(index_path(), canonical(index));
}

bool AnalysisStore::remove(const std::string& key) {
  if (!writable()) throw Error(ErrorCode::Io, root_.string() + ": store is read-only");
  WriterLock lock(root_ / ".lock");
  Json index = read_index(index_path());
  if (!index["entries"].contains(key)) return false;
  index["entries"].erase(key);
  write_atomically(index_path(), canonical(index));
  std::error_code ec;
  fs::remove(blob_path(key), ec);
  return true;
}

LookupResult lookup_or_verify(AnalysisStore& store, const LineageGraph& graph,
                              const InterpretationMap& interpretations, const Policy& policy) {
  const ProvenanceRecord& root = graph.root();
  const std::string key = analysis_key(root, policy);
  LookupResult result;

  if (auto stored = store.load(key)) {
    if (stored->audit == make_audit(graph, interpretations, policy)) {
      result.verified = std::move(*stored);
      result.cache_hit = true;
      return result;
    }
    result.warnings.push_back("StaleEntry: stored analysis " + key +
                              " was computed from different inputs; recomputing");
  }

  result.verified = verify(graph, interpretations, policy);
  if (store.writable()) {
    store.persist(key, result.verified, root.dataset_name);
  } else {
    result.warnings.push_back("store " + store.root().string() +
                              " is read-only; analysis " + key + " not persisted");
  }
  return result;
}

}  // namespace dla
