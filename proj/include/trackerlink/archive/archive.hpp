#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trackerlink/core/model.hpp"
#include "trackerlink/extract/extractor.hpp"
#include "trackerlink/fetch/fetcher.hpp"

namespace trackerlink::archive {

inline constexpr const char* kDefaultEndpoint = "https://web.archive.org";
inline constexpr const char* kArchiveGateKey = "archive.org";
inline constexpr std::size_t kArchiveConcurrency = 2;

/// Header row of the CDX JSON output, matched exactly.
inline const std::vector<std::string> kCdxHeader = {"urlkey", "timestamp", "original", "mimetype",
                                                    "statuscode", "digest", "length"};

struct SnapshotRef {
  core::DomainKey domain;
  std::string snapshot_ts;  // YYYYMMDDhhmmss
  std::string original_url;
  std::string mimetype;
  std::string digest;
  int status_code = 0;

  core::Timestamp instant() const;
};

enum class Granularity { Month, Year, Every };

std::string_view to_string(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view text);

struct SamplingPolicy {
  Granularity granularity = Granularity::Month;
  std::size_t max_snapshots = 60;
};

/// The CDX body is not the documented JSON table at all.
class CdxFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CdxParse {
  std::vector<SnapshotRef> rows;
  std::vector<std::string> warnings;  // one per skipped row
};

/// Parses `output=json` CDX text for `domain`. Rows with the wrong arity,
/// non-string cells, bad timestamps or non-numeric status are skipped with a
/// warning. An empty body or `[]` is an empty result.
CdxParse parse_cdx_json(std::string_view body, const core::DomainKey& domain);

/// Keeps fetchable root-page captures: status 200, an HTML-ish mimetype, and
/// an original URL that is the bare domain (or its www host) at path "/".
bool is_root_capture(const SnapshotRef& ref);

/// Sorts ascending, drops repeats of an earlier digest, keeps the first
/// capture per period, then thins evenly down to max_snapshots (first and
/// last kept).
std::vector<SnapshotRef> sample_snapshots(std::vector<SnapshotRef> refs, const SamplingPolicy& policy);

std::string cdx_query_url(std::string_view endpoint, const core::DomainKey& domain, std::string_view from_ts,
                          std::string_view to_ts);
/// Raw-content form: `<endpoint>/web/<ts>id_/<original>`.
std::string snapshot_url(std::string_view endpoint, std::string_view ts, std::string_view original_url);

/// Removes archive-inserted markup (the toolbar block and its static
/// scripts). A body fetched in the raw form normally has none.
std::string strip_archive_markup(std::string_view body);

struct ArchiveConfig {
  std::string endpoint = kDefaultEndpoint;
  SamplingPolicy sampling;
  int throttle_retries = 5;
  std::chrono::milliseconds backoff_base{2000};
  std::string user_agent;
};

struct ArchiveError {
  fetch::FailureReason reason = fetch::FailureReason::Transport;
  std::string detail;
  int status_code = 0;
};

struct SnapshotList {
  std::vector<SnapshotRef> refs;
  std::size_t raw_rows = 0;
  std::vector<std::string> warnings;
};

class ArchiveClient {
 public:
  /// Requests go through `gate` under one shared key limited to two in flight.
  ArchiveClient(fetch::HttpClient& http, fetch::PolitenessGate& gate, ArchiveConfig config,
                store::Store* store = nullptr);

  Expected<SnapshotList, ArchiveError> list_snapshots(const core::DomainKey& domain, std::string_view from_ts,
                                                      std::string_view to_ts);
  Expected<SnapshotList, ArchiveError> list_snapshots(const core::DomainKey& domain, std::string_view from_ts,
                                                      std::string_view to_ts, const SamplingPolicy& sampling);

  fetch::FetchOutcome fetch_snapshot(const SnapshotRef& ref);
  /// Fetches `url` as archived at `ts`.
  fetch::FetchOutcome fetch_archived(std::string_view ts, std::string_view url);

  const ArchiveConfig& config() const noexcept { return config_; }
  void set_sleeper(fetch::Fetcher::Sleeper s) { fetcher_.set_sleeper(std::move(s)); }

 private:
  ArchiveConfig config_;
  fetch::Fetcher fetcher_;
};

struct SnapshotScan {
  SnapshotRef ref;
  bool fetched = false;
  std::string skip_reason;  // "404", "HTTP_STATUS", ...
  std::vector<std::string> script_urls;
  std::vector<core::Observation> observations;
};

struct HistoryScan {
  core::DomainKey domain;
  std::size_t listed = 0;
  std::vector<SnapshotScan> snapshots;
  std::vector<std::string> warnings;
  std::optional<ArchiveError> error;  // listing failed

  /// Every observation, deduplicated per (domain, id, snapshot).
  std::vector<core::Observation> observations() const;
  std::size_t fetched() const;
  std::size_t skipped() const;
};

/// The history function for one domain: list, sample, fetch each snapshot
/// and its archived same-domain scripts, and extract ids tagged
/// ARCHIVE(snapshot_ts). Missing snapshots are skipped; the scan never throws
/// on network trouble.
HistoryScan scan_history(ArchiveClient& client, const core::DomainKey& domain, std::string_view from_ts,
                         std::string_view to_ts, const extract::ExtractorConfig& extractor = {});

}  // namespace trackerlink::archive
