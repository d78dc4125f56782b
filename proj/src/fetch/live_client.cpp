// httplib is heavy; keep it to this one translation unit.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <netdb.h>
#include <sys/socket.h>

#include "trackerlink/core/text.hpp"
#include "trackerlink/fetch/http_client.hpp"

namespace trackerlink::fetch {

namespace {

std::optional<TransportError> resolve(const std::string& host) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (res) ::freeaddrinfo(res);
  if (rc == 0) return std::nullopt;
  const bool definitive = rc == EAI_NONAME
#ifdef EAI_NODATA
                          || rc == EAI_NODATA
#endif
      ;
  return TransportError{FailureReason::Dns, std::string("resolve ") + host + ": " + ::gai_strerror(rc), !definitive};
}

TransportError map_error(httplib::Error e) {
  switch (e) {
    case httplib::Error::ConnectionTimeout:
      return {FailureReason::ConnectTimeout, httplib::to_string(e), true};
    case httplib::Error::Connection:
    case httplib::Error::BindIPAddress:
    case httplib::Error::ProxyConnection:
      return {FailureReason::Connect, httplib::to_string(e), true};
    case httplib::Error::SSLConnection:
    case httplib::Error::SSLLoadingCerts:
    case httplib::Error::SSLServerVerification:
      return {FailureReason::Tls, httplib::to_string(e), false};
    default:
      return {FailureReason::Transport, httplib::to_string(e), true};
  }
}

class LiveClient final : public HttpClient {
 public:
  HttpOutcome get(const core::Url& url, const RequestOptions& opts) override {
    if (auto err = resolve(url.host)) return unexpected(*err);

    httplib::Client cli(url.origin());
    cli.set_follow_location(false);
    cli.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(opts.connect_timeout));
    cli.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(opts.read_timeout));
    cli.set_decompress(true);
    if (url.scheme == "https") cli.enable_server_certificate_verification(true);

    HttpResponse out;
    bool truncated = false;
    httplib::Headers headers = {{"User-Agent", opts.user_agent}, {"Accept", "text/html,*/*;q=0.8"}};
    auto res = cli.Get(
        url.target, headers,
        [&](const httplib::Response& r) {
          out.status = r.status;
          for (const auto& [k, v] : r.headers) out.headers[core::to_lower_ascii(k)] = v;
          return true;
        },
        [&](const char* data, std::size_t len) {
          const std::size_t room = opts.max_body_bytes - out.body.size();
          out.body.append(data, std::min(room, len));
          if (len > room) truncated = true;
          return !truncated;
        });
    // Stopping at the size cap surfaces as Canceled; the prefix is still usable.
    if (!res && !(truncated && res.error() == httplib::Error::Canceled)) return unexpected(map_error(res.error()));
    return out;
  }
};

}  // namespace

std::unique_ptr<HttpClient> make_live_client() { return std::make_unique<LiveClient>(); }

}  // namespace trackerlink::fetch
