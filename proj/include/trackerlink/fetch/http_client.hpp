#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "trackerlink/core/expected.hpp"
#include "trackerlink/core/url.hpp"

namespace trackerlink::fetch {

enum class FailureReason {
  Dns,
  ConnectTimeout,
  Connect,
  Tls,
  HttpStatus,
  TooManyRedirects,
  RobotsDisallowed,
  Offline,
  InvalidUrl,
  Transport,  // read/write errors mid-response
};

const char* to_string(FailureReason r) noexcept;

struct HttpResponse {
  int status = 0;
  std::map<std::string, std::string> headers;  // keys lower-cased
  std::string body;

  std::string header(const std::string& lower_name) const;
};

struct TransportError {
  FailureReason reason = FailureReason::Transport;
  std::string detail;
  bool transient = true;  // worth retrying
};

using HttpOutcome = Expected<HttpResponse, TransportError>;

struct RequestOptions {
  std::string user_agent;
  std::chrono::milliseconds connect_timeout{15000};
  std::chrono::milliseconds read_timeout{30000};
  std::size_t max_body_bytes = 16u * 1024u * 1024u;
};

/// One hop: no redirect following at this layer.
class HttpClient {
 public:
  virtual ~HttpClient() = default;
  virtual HttpOutcome get(const core::Url& url, const RequestOptions& opts) = 0;
};

/// Real network access over httplib, with OpenSSL for https. DNS resolution
/// happens first so a missing host is reported as its own failure.
std::unique_ptr<HttpClient> make_live_client();

/// Refuses every request; used for --offline runs so any accidental network
/// access fails loudly.
class OfflineClient final : public HttpClient {
 public:
  HttpOutcome get(const core::Url& url, const RequestOptions& opts) override;
};

/// Serves recorded responses from a fixture directory.
///
/// routes.json:
///   {"routes": [{"url": "http://a.sk/", "status": 301, "headers": {"location": "https://www.a.sk/"}},
///               {"url": "https://www.a.sk/", "body_file": "a.html"},
///               {"prefix": "https://web.archive.org/web/", "status": 404}],
///    "dns_fail": ["dead.sk"], "connect_fail": ["down.sk"], "tls_fail": ["badcert.sk"],
///    "sequence": {"http://flaky.sk/": [503, 200]}}
/// Hosts that appear nowhere resolve as DNS failures; unknown paths on known
/// hosts answer 404.
class ReplayClient final : public HttpClient {
 public:
  explicit ReplayClient(const std::filesystem::path& dir);
  HttpOutcome get(const core::Url& url, const RequestOptions& opts) override;

  /// URLs requested so far, in call order.
  std::vector<std::string> requests() const;

 private:
  struct Route {
    int status = 200;
    std::map<std::string, std::string> headers;
    std::filesystem::path body_file;
    std::string body;
  };

  std::filesystem::path dir_;
  std::map<std::string, Route> exact_;
  std::vector<std::pair<std::string, Route>> prefixes_;
  std::map<std::string, std::vector<int>> sequences_;
  std::map<std::string, FailureReason> host_failures_;
  std::map<std::string, bool> known_hosts_;
  mutable std::mutex mu_;
  std::map<std::string, std::size_t> sequence_pos_;
  std::vector<std::string> log_;
};

}  // namespace trackerlink::fetch
