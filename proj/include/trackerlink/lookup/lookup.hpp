#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trackerlink/core/model.hpp"
#include "trackerlink/fetch/http_client.hpp"

namespace trackerlink::store {
class Store;
}

namespace trackerlink::lookup {

using Date = std::chrono::year_month_day;

struct LookupDomain {
  core::DomainKey domain;
  std::optional<Date> first_seen;
  std::optional<Date> last_seen;
};

struct LookupRecord {
  core::TrackingId id;
  std::vector<LookupDomain> domains;  // sorted by registrable domain, one entry each
  std::string provider;
  core::Timestamp retrieved_at{};
  std::string blob_hash;  // raw response in the store, when persisted

  bool contains(const core::DomainKey& d) const;
};

/// Normalizes hosts to registrable domains and merges duplicates, keeping the
/// widest seen range (earliest first_seen, latest last_seen). Hosts that have
/// no registrable domain are dropped.
std::vector<LookupDomain> collapse_domains(const std::vector<std::pair<std::string, LookupDomain>>& raw);

enum class LookupErrorKind { Auth, Quota, Transport, BadResponse, Unsupported };

std::string_view to_string(LookupErrorKind k);

struct LookupError {
  LookupErrorKind kind = LookupErrorKind::Transport;
  std::string detail;
};

struct RawResponse {
  std::string body;
  std::string status;  // "found", "not_found"
};

/// Adapter contract: query() returns the provider-native payload, parse()
/// maps it to a record. parse() must accept any payload query() returned.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string name() const = 0;
  virtual bool supports(core::IdKind kind) const = 0;
  virtual Expected<RawResponse, LookupError> query(const core::TrackingId& id) = 0;
  virtual Expected<LookupRecord, LookupError> parse(const core::TrackingId& id, std::string_view raw) const = 0;
};

/// Reads `<dir>/<canonical id>.json`:
///   {"domains": [{"domain": "www.a.sk", "first_seen": "2016-03-01", "last_seen": "2021-04-30"}, ...]}
/// A missing file is an unknown id. `{"error": "auth"|"quota"}` simulates
/// provider failures.
class FixtureProvider final : public Provider {
 public:
  explicit FixtureProvider(std::filesystem::path dir, std::string name = "fixture");
  std::string name() const override { return name_; }
  bool supports(core::IdKind) const override { return true; }
  Expected<RawResponse, LookupError> query(const core::TrackingId& id) override;
  Expected<LookupRecord, LookupError> parse(const core::TrackingId& id, std::string_view raw) const override;

 private:
  std::filesystem::path dir_;
  std::string name_;
};

inline constexpr const char* kSpyOnWebTokenEnv = "SPYONWEB_ACCESS_TOKEN";
inline constexpr const char* kSpyOnWebEndpoint = "https://api.spyonweb.com/v1";

/// SpyOnWeb v1 API (analytics and adsense lookups). The access token comes
/// from the environment only.
class SpyOnWebProvider final : public Provider {
 public:
  SpyOnWebProvider(fetch::HttpClient& http, std::string token, std::string endpoint = kSpyOnWebEndpoint,
                   std::string user_agent = {});
  /// Reads the token from SPYONWEB_ACCESS_TOKEN; nullptr when unset.
  static std::unique_ptr<SpyOnWebProvider> from_environment(fetch::HttpClient& http,
                                                            std::string endpoint = kSpyOnWebEndpoint,
                                                            std::string user_agent = {});

  std::string name() const override { return "spyonweb"; }
  bool supports(core::IdKind kind) const override;
  Expected<RawResponse, LookupError> query(const core::TrackingId& id) override;
  Expected<LookupRecord, LookupError> parse(const core::TrackingId& id, std::string_view raw) const override;

 private:
  fetch::HttpClient& http_;
  std::string token_;
  std::string endpoint_;
  std::string user_agent_;
};

struct ServiceConfig {
  std::chrono::seconds cache_ttl = std::chrono::hours(24 * 30);
  std::chrono::milliseconds min_interval{1000};  // between provider requests
};

/// Cached, serialized access to one provider. One request in flight at a
/// time; an auth failure disables the provider for the rest of the run.
class LookupService {
 public:
  using Clock = std::function<core::Timestamp()>;
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  LookupService(Provider& provider, store::Store* store, ServiceConfig config = {});

  Expected<LookupRecord, LookupError> lookup(const core::TrackingId& id);

  void set_clock(Clock c) { clock_ = std::move(c); }
  void set_sleeper(Sleeper s) { sleep_ = std::move(s); }

  std::size_t provider_requests() const noexcept { return requests_; }
  std::size_t cache_hits() const noexcept { return cache_hits_; }
  bool disabled() const noexcept { return disabled_.has_value(); }
  const Provider& provider() const noexcept { return provider_; }

 private:
  Provider& provider_;
  store::Store* store_;
  ServiceConfig config_;
  Clock clock_;
  Sleeper sleep_;
  std::mutex mu_;
  std::optional<LookupError> disabled_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
  std::size_t requests_ = 0;
  std::size_t cache_hits_ = 0;
};

enum class RelicReason { Blocklist, Stale, Liveness, Self };

std::string_view to_string(RelicReason r);

/// Archive, platform, parking and marketplace infrastructure.
const std::vector<std::string>& default_relic_blocklist();

struct RelicPolicy {
  bool use_blocklist = true;
  std::vector<std::string> blocklist = default_relic_blocklist();
  bool use_staleness = true;
  int horizon_years = 10;
  bool verify_live = false;
  bool drop_self = true;
};

struct RelicContext {
  Date run_date{};
  std::set<core::DomainKey> self;  // the queried seed's own domains
  std::function<bool(const core::DomainKey&)> is_live;  // used when verify_live
};

struct Removal {
  core::DomainKey domain;
  RelicReason reason;
  std::string detail;
};

struct FilterResult {
  LookupRecord record;
  std::vector<Removal> removals;
};

/// Drops relic domains. First matching rule wins in the order blocklist,
/// self, stale, liveness. Never adds domains; filtering its own output
/// removes nothing further.
FilterResult filter_relics(const LookupRecord& record, const RelicPolicy& policy, const RelicContext& context);

bool on_blocklist(const core::DomainKey& d, const std::vector<std::string>& blocklist);

struct ExpandConfig {
  int depth = 1;  // 1: seeds -> ids -> domains; 2: also ids found on those domains
  RelicPolicy relic;
  std::function<bool(const core::DomainKey&)> is_live;
  // Scans a newly discovered domain for its own ids (needed for depth 2).
  std::function<std::vector<core::Observation>(const core::DomainKey&)> scan_domain;
  Date run_date{};
};

struct LookupGap {
  core::TrackingId id;
  LookupErrorKind kind;
  std::string detail;
};

struct ExpandResult {
  std::vector<core::Observation> observations;  // REVERSE_LOOKUP, plus live hits on new domains at depth 2
  std::vector<LookupRecord> records;            // filtered
  std::vector<Removal> removals;
  std::vector<LookupGap> gaps;
  std::set<core::DomainKey> discovered;
  bool auth_failed = false;
};

constexpr int kMaxExpandDepth = 2;

/// Looks up every id observed on the wave's ACTIVE seeds and turns the
/// filtered domain lists into observations. Depth is clamped to [1, 2].
ExpandResult expand(const core::ScanWave& wave, LookupService& service, const ExpandConfig& config);

}  // namespace trackerlink::lookup
