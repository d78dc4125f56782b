#include "trackerlink/store/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "trackerlink/store/sha256.hpp"

namespace trackerlink::store {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string unique_suffix() {
  static std::atomic<std::uint64_t> counter{0};
  return "." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1)) + ".tmp";
}

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw StoreError(std::string("write failed: ") + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

// File names must stay portable; canonical ids are already [A-Za-z0-9-].
std::string safe_name(std::string_view s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') ? c : '_';
  return out;
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + unique_suffix();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw StoreError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StoreError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Store::Store(fs::path root) : root_(std::move(root)) {
  for (const char* dir : {"blobs", "waves", "lookups"}) fs::create_directories(root_ / dir);
  writer_ = std::jthread([this](std::stop_token st) { writer_loop(st); });
}

Store::~Store() {
  try {
    flush();
  } catch (const StoreError&) {
  }
  writer_.request_stop();
  queue_cv_.notify_all();
}

fs::path Store::blob_path(const std::string& hash) const { return root_ / "blobs" / hash.substr(0, 2) / hash; }

std::string Store::put_blob(std::string_view bytes) {
  std::string hash = sha256_hex(bytes);
  const fs::path path = blob_path(hash);
  if (!fs::exists(path)) write_file_atomic(path, bytes);
  return hash;
}

std::optional<std::string> Store::get_blob(const std::string& hash) const {
  const fs::path path = blob_path(hash);
  if (hash.size() != 64 || !fs::exists(path)) return std::nullopt;
  std::string data = read_file(path);
  if (sha256_hex(data) != hash) throw StoreError("blob integrity check failed: " + hash);
  return data;
}

bool Store::has_blob(const std::string& hash) const { return hash.size() == 64 && fs::exists(blob_path(hash)); }

std::string Store::fact_key(const std::string& wave, const core::Observation& obs) {
  std::string key = wave;
  for (std::string_view part :
       {std::string_view(obs.domain.registrable), core::to_string(obs.id.kind()), std::string_view(obs.id.account()),
        core::to_string(obs.provenance.cls), std::string_view(obs.provenance.snapshot_ts),
        std::string_view(obs.provenance.provider)}) {
    key += '\x1f';
    key += part;
  }
  return key;
}

void Store::ensure_index_loaded() {
  if (index_loaded_) return;
  index_loaded_ = true;
  std::ifstream in(root_ / "observations.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    try {
      auto rec = observation_from_json(json::parse(line));
      logged_facts_.insert(fact_key(rec.wave, rec.observation));
    } catch (const std::exception&) {
      // Corrupt lines are reported by load_observations, not here.
    }
  }
}

bool Store::append_observation(const std::string& wave, const core::Observation& obs) {
  std::string line = observation_to_json(wave, obs).dump() + "\n";
  {
    std::lock_guard lock(queue_mutex_);
    ensure_index_loaded();
    if (!logged_facts_.insert(fact_key(wave, obs)).second) return false;
    queue_.push_back(std::move(line));
    ++in_flight_;
  }
  queue_cv_.notify_one();
  return true;
}

void Store::flush() const {
  std::unique_lock lock(queue_mutex_);
  drained_cv_.wait(lock, [this] { return in_flight_ == 0; });
  if (!write_error_.empty()) throw StoreError(write_error_);
}

void Store::writer_loop(std::stop_token stop) {
  const std::string path = (root_ / "observations.jsonl").string();
  int fd = -1;
  std::unique_lock lock(queue_mutex_);
  while (true) {
    queue_cv_.wait(lock, stop, [this] { return !queue_.empty(); });
    if (queue_.empty()) break;  // stop requested and nothing left
    std::string batch;
    std::size_t count = 0;
    while (!queue_.empty()) {
      batch += queue_.front();
      queue_.pop_front();
      ++count;
    }
    lock.unlock();
    std::string error;
    if (fd < 0) fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) {
      error = "cannot open " + path + ": " + std::strerror(errno);
    } else {
      try {
        // Whole lines per write(2) call on an O_APPEND descriptor.
        write_all(fd, batch);
      } catch (const StoreError& e) {
        error = e.what();
      }
    }
    lock.lock();
    if (!error.empty() && write_error_.empty()) write_error_ = error;
    in_flight_ -= count;
    drained_cv_.notify_all();
  }
  if (fd >= 0) ::close(fd);
}

std::vector<WaveObservation> Store::load_observations(const LoadOptions& options, LoadReport* report) const {
  flush();
  std::vector<WaveObservation> out;
  std::ifstream in(root_ / "observations.jsonl");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(observation_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      if (!options.skip_corrupt) throw CorruptLogError(line_no, e.what());
      if (report) report->skipped_lines.push_back(line_no);
    }
  }
  return out;
}

void Store::save_manifest(const WaveManifest& m) {
  for (const auto& blob : m.blobs)
    if (!has_blob(blob)) throw StoreError("wave '" + m.name + "' references missing blob " + blob);
  json j;
  j["name"] = m.name;
  j["started_at"] = core::format_iso8601(m.started_at);
  j["finished_at"] = m.finished_at ? json(core::format_iso8601(*m.finished_at)) : json(nullptr);
  j["config_hash"] = m.config_hash;
  j["seeds"] = json::array();
  for (const auto& s : m.seeds) j["seeds"].push_back(seed_to_json(s));
  std::vector<std::string> blobs = m.blobs;
  std::sort(blobs.begin(), blobs.end());
  blobs.erase(std::unique(blobs.begin(), blobs.end()), blobs.end());
  j["blobs"] = blobs;
  j["augmentations"] = json::array();
  for (const auto& a : m.augmentations)
    j["augmentations"].push_back({{"kind", a.kind}, {"detail", a.detail}, {"at", core::format_iso8601(a.at)}});
  write_file_atomic(root_ / "waves" / (safe_name(m.name) + ".json"), j.dump(2) + "\n");
}

bool Store::has_wave(const std::string& name) const {
  return fs::exists(root_ / "waves" / (safe_name(name) + ".json"));
}

WaveManifest Store::load_manifest(const std::string& name) const {
  const fs::path path = root_ / "waves" / (safe_name(name) + ".json");
  if (!fs::exists(path)) throw WaveNotFound(name);
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw StoreError("corrupt wave manifest " + path.string() + ": " + e.what());
  }
  WaveManifest m;
  m.name = j.at("name").get<std::string>();
  m.started_at = core::parse_iso8601(j.at("started_at").get<std::string>()).value_or(core::Timestamp{});
  if (j.contains("finished_at") && j["finished_at"].is_string())
    m.finished_at = core::parse_iso8601(j["finished_at"].get<std::string>());
  m.config_hash = j.value("config_hash", "");
  for (const auto& s : j.at("seeds")) m.seeds.push_back(seed_from_json(s, m.name));
  m.blobs = j.value("blobs", std::vector<std::string>{});
  if (j.contains("augmentations"))
    for (const auto& a : j["augmentations"])
      m.augmentations.push_back({a.value("kind", ""), a.value("detail", ""),
                                 core::parse_iso8601(a.value("at", "")).value_or(core::Timestamp{})});
  return m;
}

std::vector<std::string> Store::list_waves() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root_ / "waves"))
    if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

core::ScanWave Store::load_wave(const std::string& name, const LoadOptions& options, LoadReport* report) const {
  WaveManifest m = load_manifest(name);
  core::ScanWave wave;
  wave.name = m.name;
  wave.started_at = m.started_at;
  wave.finished_at = m.finished_at;
  wave.seeds = std::move(m.seeds);
  for (auto& rec : load_observations(options, report))
    if (rec.wave == name) wave.observations.push_back(std::move(rec.observation));
  return wave;
}

void Store::put_lookup(const std::string& provider, const std::string& canonical_id, std::string_view raw,
                       core::Timestamp retrieved_at, const std::string& status) {
  const std::string hash = put_blob(raw);
  const fs::path path = root_ / "lookups" / safe_name(provider) / (safe_name(canonical_id) + ".json");
  json j = json::object();
  if (fs::exists(path)) {
    try {
      j = json::parse(read_file(path));
    } catch (const json::exception&) {
      j = json::object();
    }
  }
  json history = j.value("history", json::array());
  if (j.contains("blob_hash"))
    history.push_back({{"blob_hash", j["blob_hash"]}, {"retrieved_at", j["retrieved_at"]}, {"status", j["status"]}});
  j = {{"provider", provider},
       {"id", canonical_id},
       {"blob_hash", hash},
       {"retrieved_at", core::format_iso8601(retrieved_at)},
       {"status", status},
       {"history", history}};
  write_file_atomic(path, j.dump(2) + "\n");
}

std::optional<LookupIndexEntry> Store::get_lookup(const std::string& provider, const std::string& canonical_id) const {
  const fs::path path = root_ / "lookups" / safe_name(provider) / (safe_name(canonical_id) + ".json");
  if (!fs::exists(path)) return std::nullopt;
  try {
    json j = json::parse(read_file(path));
    auto at = core::parse_iso8601(j.at("retrieved_at").get<std::string>());
    if (!at) return std::nullopt;
    return LookupIndexEntry{j.at("blob_hash").get<std::string>(), *at, j.value("status", "")};
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void Store::write_meta(const StoreMeta& meta) {
  json j = {{"tool_version", meta.tool_version},
            {"config_hash", meta.config_hash},
            {"public_suffix_version", meta.public_suffix_version}};
  write_file_atomic(root_ / "meta.json", j.dump(2) + "\n");
}

std::optional<StoreMeta> Store::read_meta() const {
  const fs::path path = root_ / "meta.json";
  if (!fs::exists(path)) return std::nullopt;
  json j = json::parse(read_file(path));
  return StoreMeta{j.value("tool_version", ""), j.value("config_hash", ""), j.value("public_suffix_version", "")};
}

}  // namespace trackerlink::store
