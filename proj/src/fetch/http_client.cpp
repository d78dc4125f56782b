#include "trackerlink/fetch/http_client.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include "json.hpp"
#include "trackerlink/core/text.hpp"

namespace trackerlink::fetch {

namespace fs = std::filesystem;

const char* to_string(FailureReason r) noexcept {
  switch (r) {
    case FailureReason::Dns: return "DNS";
    case FailureReason::ConnectTimeout: return "CONNECT_TIMEOUT";
    case FailureReason::Connect: return "CONNECT";
    case FailureReason::Tls: return "TLS";
    case FailureReason::HttpStatus: return "HTTP_STATUS";
    case FailureReason::TooManyRedirects: return "TOO_MANY_REDIRECTS";
    case FailureReason::RobotsDisallowed: return "ROBOTS";
    case FailureReason::Offline: return "OFFLINE";
    case FailureReason::InvalidUrl: return "INVALID_URL";
    case FailureReason::Transport: return "TRANSPORT";
  }
  return "TRANSPORT";
}

std::string HttpResponse::header(const std::string& lower_name) const {
  auto it = headers.find(lower_name);
  return it == headers.end() ? std::string() : it->second;
}

HttpOutcome OfflineClient::get(const core::Url& url, const RequestOptions&) {
  return unexpected(TransportError{FailureReason::Offline, "offline mode refused " + url.str(), false});
}

namespace {

std::string host_of(const std::string& url) {
  auto u = core::parse_url(url);
  return u ? u->host : std::string();
}

}  // namespace

ReplayClient::ReplayClient(const fs::path& dir) : dir_(dir) {
  std::ifstream in(dir / "routes.json");
  if (!in) throw std::runtime_error("replay fixture has no routes.json: " + dir.string());
  const auto doc = nlohmann::json::parse(in);

  auto read_route = [](const nlohmann::json& r) {
    Route route;
    route.status = r.value("status", 200);
    if (r.contains("headers"))
      for (auto& [k, v] : r["headers"].items()) route.headers[core::to_lower_ascii(k)] = v.get<std::string>();
    if (r.contains("body_file")) route.body_file = r["body_file"].get<std::string>();
    route.body = r.value("body", "");
    return route;
  };

  for (const auto& r : doc.value("routes", nlohmann::json::array())) {
    if (r.contains("url")) {
      const auto url = r["url"].get<std::string>();
      exact_[url] = read_route(r);
      known_hosts_[host_of(url)] = true;
    } else if (r.contains("prefix")) {
      const auto prefix = r["prefix"].get<std::string>();
      prefixes_.emplace_back(prefix, read_route(r));
      known_hosts_[host_of(prefix)] = true;
    }
  }
  for (const auto& h : doc.value("dns_fail", nlohmann::json::array())) host_failures_[h] = FailureReason::Dns;
  for (const auto& h : doc.value("connect_fail", nlohmann::json::array())) host_failures_[h] = FailureReason::Connect;
  for (const auto& h : doc.value("timeout_fail", nlohmann::json::array()))
    host_failures_[h] = FailureReason::ConnectTimeout;
  for (const auto& h : doc.value("tls_fail", nlohmann::json::array())) host_failures_[h] = FailureReason::Tls;
  if (doc.contains("sequence"))
    for (auto& [url, seq] : doc["sequence"].items()) {
      sequences_[url] = seq.get<std::vector<int>>();
      known_hosts_[host_of(url)] = true;
    }
}

HttpOutcome ReplayClient::get(const core::Url& url, const RequestOptions&) {
  const std::string key = url.str();
  std::lock_guard lock(mu_);
  log_.push_back(key);

  if (auto it = host_failures_.find(url.host); it != host_failures_.end())
    return unexpected(TransportError{it->second, "replayed failure for " + url.host,
                                           it->second != FailureReason::Dns && it->second != FailureReason::Tls});
  if (!known_hosts_.count(url.host))
    return unexpected(TransportError{FailureReason::Dns, "unknown host " + url.host, false});

  HttpResponse resp;
  const Route* route = nullptr;
  if (auto it = exact_.find(key); it != exact_.end()) route = &it->second;
  if (!route) {
    std::size_t best = 0;
    for (const auto& [prefix, r] : prefixes_)
      if (key.rfind(prefix, 0) == 0 && prefix.size() >= best) {
        best = prefix.size();
        route = &r;
      }
  }
  if (auto it = sequences_.find(key); it != sequences_.end()) {
    auto& pos = sequence_pos_[key];
    const auto& seq = it->second;
    const int status = seq[std::min(pos, seq.size() - 1)];
    ++pos;
    if (status != 200 || !route) {
      resp.status = status;
      return resp;
    }
  }
  if (!route) {
    resp.status = 404;
    return resp;
  }
  resp.status = route->status;
  resp.headers = route->headers;
  if (!route->body_file.empty()) {
    std::ifstream body(dir_ / route->body_file, std::ios::binary);
    if (!body) throw std::runtime_error("replay body missing: " + (dir_ / route->body_file).string());
    resp.body.assign(std::istreambuf_iterator<char>(body), {});
  } else {
    resp.body = route->body;
  }
  return resp;
}

std::vector<std::string> ReplayClient::requests() const {
  std::lock_guard lock(mu_);
  return log_;
}

}  // namespace trackerlink::fetch
