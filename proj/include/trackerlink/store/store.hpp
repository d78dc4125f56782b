#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "trackerlink/core/model.hpp"
#include "trackerlink/store/serialize.hpp"

namespace trackerlink::store {

// Layout under the store root:
//   blobs/<aa>/<sha256>        content-addressed bodies
//   observations.jsonl         append-only observation log
//   waves/<name>.json          wave manifests
//   lookups/<provider>/<id>.json  index of raw provider responses (raw bytes are blobs)
//   meta.json                  tool version, config hash, public-suffix version

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptLogError : public StoreError {
 public:
  CorruptLogError(std::size_t line, const std::string& what)
      : StoreError("observations.jsonl line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class WaveNotFound : public StoreError {
 public:
  explicit WaveNotFound(const std::string& name) : StoreError("wave not found: " + name) {}
};

struct LoadOptions {
  bool skip_corrupt = false;
};

struct LoadReport {
  std::vector<std::size_t> skipped_lines;
};

struct WaveAugmentation {
  std::string kind;  // "history", "expand"
  std::string detail;
  core::Timestamp at{};
};

/// Wave manifest as persisted; observations live in the log.
struct WaveManifest {
  std::string name;
  core::Timestamp started_at{};
  std::optional<core::Timestamp> finished_at;
  std::string config_hash;
  std::vector<core::SeedEntry> seeds;
  std::vector<std::string> blobs;
  std::vector<WaveAugmentation> augmentations;
};

struct StoreMeta {
  std::string tool_version;
  std::string config_hash;
  std::string public_suffix_version;
};

struct LookupIndexEntry {
  std::string blob_hash;
  core::Timestamp retrieved_at{};
  std::string status;  // provider-reported outcome ("found", "not_found", ...)
};

class Store {
 public:
  /// Opens (creating directories as needed) the store at `root`.
  explicit Store(std::filesystem::path root);
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::filesystem::path& root() const noexcept { return root_; }

  std::string put_blob(std::string_view bytes);
  std::optional<std::string> get_blob(const std::string& hash) const;
  bool has_blob(const std::string& hash) const;
  std::filesystem::path blob_path(const std::string& hash) const;

  /// Queues one record for the single log writer. Returns false when the
  /// same fact (wave, domain, identity, full provenance) is already logged.
  bool append_observation(const std::string& wave, const core::Observation& obs);
  /// Blocks until every queued record is on disk; throws StoreError if the
  /// writer failed.
  void flush() const;

  std::vector<WaveObservation> load_observations(const LoadOptions& options = {}, LoadReport* report = nullptr) const;

  void save_manifest(const WaveManifest& manifest);
  WaveManifest load_manifest(const std::string& name) const;
  bool has_wave(const std::string& name) const;
  std::vector<std::string> list_waves() const;

  /// Manifest plus every logged observation of that wave. Throws WaveNotFound.
  core::ScanWave load_wave(const std::string& name, const LoadOptions& options = {},
                           LoadReport* report = nullptr) const;

  void put_lookup(const std::string& provider, const std::string& canonical_id, std::string_view raw,
                  core::Timestamp retrieved_at, const std::string& status);
  std::optional<LookupIndexEntry> get_lookup(const std::string& provider, const std::string& canonical_id) const;

  void write_meta(const StoreMeta& meta);
  std::optional<StoreMeta> read_meta() const;

 private:
  void writer_loop(std::stop_token stop);
  void ensure_index_loaded();
  static std::string fact_key(const std::string& wave, const core::Observation& obs);

  std::filesystem::path root_;

  mutable std::mutex queue_mutex_;
  std::condition_variable_any queue_cv_;
  mutable std::condition_variable drained_cv_;
  std::deque<std::string> queue_;
  std::size_t in_flight_ = 0;
  bool index_loaded_ = false;
  std::set<std::string> logged_facts_;
  std::string write_error_;
  std::jthread writer_;
};

void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace trackerlink::store
