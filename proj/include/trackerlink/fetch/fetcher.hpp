#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "trackerlink/core/domain.hpp"
#include "trackerlink/core/expected.hpp"
#include "trackerlink/core/time.hpp"
#include "trackerlink/fetch/http_client.hpp"
#include "trackerlink/fetch/politeness.hpp"
#include "trackerlink/fetch/robots.hpp"

namespace trackerlink::store {
class Store;
}

namespace trackerlink::fetch {

inline constexpr const char* kRobotsToken = "trackerlink";

struct FetchConfig {
  // Sent verbatim. Built by default_user_agent() unless the config overrides it.
  std::string user_agent;
  std::size_t max_redirects = 10;
  int retries = 2;
  std::chrono::milliseconds backoff_base{1000};
  std::chrono::milliseconds connect_timeout{15000};
  std::chrono::milliseconds read_timeout{30000};
  std::size_t max_body_bytes = 16u * 1024u * 1024u;
  bool respect_robots = true;
};

std::string default_user_agent(const std::string& contact_url);

struct FetchResult {
  std::string requested_url;
  std::string final_url;
  int status_code = 0;
  std::string content_type;
  std::string body;
  core::Timestamp fetched_at{};
  std::vector<std::string> redirect_chain;  // every URL visited before final_url
  std::string body_hash;
};

struct FetchFailure {
  FailureReason reason = FailureReason::Transport;
  std::string detail;
  int status_code = 0;
  std::vector<std::string> redirect_chain;

  /// A failure that means the site is not there (as opposed to us being
  /// refused or throttled).
  bool hard() const noexcept;
};

using FetchOutcome = Expected<FetchResult, FetchFailure>;

/// Redirect-following, retrying, robots-aware fetcher. Thread-safe; every
/// request passes through the shared politeness gate.
class Fetcher {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  Fetcher(HttpClient& client, FetchConfig config, PolitenessGate& gate, store::Store* store = nullptr);

  FetchOutcome fetch_url(const std::string& url);
  /// Fetches the root page of a domain, starting from http://<host>/.
  FetchOutcome fetch_live(const core::DomainKey& domain);
  /// Fetches many domains concurrently; results come back in input order.
  std::vector<FetchOutcome> fetch_live_all(const std::vector<core::DomainKey>& domains, std::size_t workers);
  std::vector<FetchOutcome> fetch_urls(const std::vector<std::string>& urls, std::size_t workers);

  /// Replaces the backoff sleep (tests).
  void set_sleeper(Sleeper s) { sleep_ = std::move(s); }
  /// Overrides the politeness key derived from the request host.
  void set_gate_key(std::string key) { gate_key_ = std::move(key); }

  const FetchConfig& config() const noexcept { return config_; }

 private:
  Expected<HttpResponse, FetchFailure> get_with_retries(const core::Url& url);
  const RobotsRules& robots_for(const core::Url& url);
  std::string key_for(const core::Url& url) const;

  HttpClient& client_;
  FetchConfig config_;
  PolitenessGate& gate_;
  store::Store* store_;
  Sleeper sleep_;
  std::string gate_key_;
  std::mutex robots_mu_;
  std::map<std::string, std::unique_ptr<RobotsRules>> robots_;
};

/// Runs `fn(i)` for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace trackerlink::fetch
