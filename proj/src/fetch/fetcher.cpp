#include "trackerlink/fetch/fetcher.hpp"

#include <atomic>
#include <exception>
#include <optional>
#include <thread>

#include <spdlog/spdlog.h>

#include "trackerlink/store/sha256.hpp"
#include "trackerlink/store/store.hpp"

namespace trackerlink::fetch {

namespace {

constexpr std::size_t kRobotsRedirects = 5;

bool retryable_status(int status) { return status == 408 || status == 429 || status >= 500; }

FetchFailure failure(FailureReason r, std::string detail, std::vector<std::string> chain = {}, int status = 0) {
  FetchFailure f;
  f.reason = r;
  f.detail = std::move(detail);
  f.redirect_chain = std::move(chain);
  f.status_code = status;
  return f;
}

}  // namespace

std::string default_user_agent(const std::string& contact_url) {
  std::string ua = "trackerlink/0.3.0 (website attribution research";
  if (!contact_url.empty()) ua += "; +" + contact_url;
  return ua + ")";
}

bool FetchFailure::hard() const noexcept {
  switch (reason) {
    case FailureReason::RobotsDisallowed:
    case FailureReason::Offline:
      return false;
    default:
      return true;
  }
}

Fetcher::Fetcher(HttpClient& client, FetchConfig config, PolitenessGate& gate, store::Store* store)
    : client_(client), config_(std::move(config)), gate_(gate), store_(store) {
  if (config_.user_agent.empty()) config_.user_agent = default_user_agent("");
  sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::string Fetcher::key_for(const core::Url& url) const {
  if (!gate_key_.empty()) return gate_key_;
  if (auto d = core::try_registrable_domain(url.host)) return d->registrable;
  return url.host;
}

Expected<HttpResponse, FetchFailure> Fetcher::get_with_retries(const core::Url& url) {
  RequestOptions opts{config_.user_agent, config_.connect_timeout, config_.read_timeout, config_.max_body_bytes};
  const int attempts = std::max(0, config_.retries) + 1;
  for (int attempt = 0;; ++attempt) {
    auto r = client_.get(url, opts);
    const bool last = attempt + 1 >= attempts;
    if (!r) {
      const auto& e = r.error();
      if (!e.transient || last) return unexpected(failure(e.reason, e.detail));
    } else if (!retryable_status(r->status) || last) {
      return std::move(*r);
    }
    auto delay = config_.backoff_base * (1 << attempt);
    if (r && r->status == 429) {
      // Honor a numeric Retry-After, capped so one host cannot stall a run.
      const auto ra = r->header("retry-after");
      if (!ra.empty() && ra.find_first_not_of("0123456789") == std::string::npos && ra.size() < 6)
        delay = std::max(delay, std::chrono::milliseconds(std::min(60, std::stoi(ra)) * 1000));
    }
    sleep_(delay);
  }
}

const RobotsRules& Fetcher::robots_for(const core::Url& url) {
  const std::string origin = url.origin();
  {
    std::lock_guard lock(robots_mu_);
    if (auto it = robots_.find(origin); it != robots_.end()) return *it->second;
  }
  auto rules = std::make_unique<RobotsRules>(RobotsRules::allow_all());
  RequestOptions opts{config_.user_agent, config_.connect_timeout, config_.read_timeout, 512 * 1024};
  core::Url target = url;
  target.target = "/robots.txt";
  for (std::size_t hop = 0; hop <= kRobotsRedirects; ++hop) {
    auto r = client_.get(target, opts);
    if (!r) {
      spdlog::debug("robots.txt unavailable for {}: {}", origin, r.error().detail);
      break;
    }
    if (r->status >= 300 && r->status < 400) {
      auto next = core::resolve_url(target, r->header("location"));
      if (!next || key_for(*next) != key_for(url)) break;
      target = *next;
      continue;
    }
    if (r->status >= 200 && r->status < 300) *rules = RobotsRules::parse(r->body, kRobotsToken);
    break;
  }
  std::lock_guard lock(robots_mu_);
  auto& slot = robots_[origin];
  if (!slot) slot = std::move(rules);
  return *slot;
}

FetchOutcome Fetcher::fetch_url(const std::string& url) {
  auto parsed = core::parse_url(url);
  if (!parsed) return unexpected(failure(FailureReason::InvalidUrl, "cannot parse " + url));
  core::Url current = *parsed;
  std::vector<std::string> chain;
  std::optional<PolitenessGate::Permit> permit;
  std::string held;

  for (;;) {
    const std::string key = key_for(current);
    if (!permit || key != held) {
      permit.reset();
      permit.emplace(gate_.acquire(key));
      held = key;
    }
    if (config_.respect_robots && !robots_for(current).allowed(current.target))
      return unexpected(failure(FailureReason::RobotsDisallowed, "robots.txt disallows " + current.str(), chain));

    auto r = get_with_retries(current);
    if (!r) {
      auto f = r.error();
      f.redirect_chain = chain;
      return unexpected(std::move(f));
    }
    const int status = r->status;
    if (status >= 300 && status < 400) {
      const auto location = r->header("location");
      if (location.empty())
        return unexpected(failure(FailureReason::HttpStatus, "redirect without location", chain, status));
      if (chain.size() >= config_.max_redirects)
        return unexpected(failure(FailureReason::TooManyRedirects,
                                        "more than " + std::to_string(config_.max_redirects) + " redirects", chain, status));
      auto next = core::resolve_url(current, location);
      if (!next) return unexpected(failure(FailureReason::InvalidUrl, "bad redirect target " + location, chain, status));
      chain.push_back(current.str());
      current = *next;
      continue;
    }
    if (status >= 400 || status < 200)
      return unexpected(failure(FailureReason::HttpStatus, "HTTP " + std::to_string(status), chain, status));

    FetchResult out;
    out.requested_url = url;
    out.final_url = current.str();
    out.status_code = status;
    out.content_type = r->header("content-type");
    out.body = std::move(r->body);
    out.fetched_at = core::now_utc();
    out.redirect_chain = std::move(chain);
    out.body_hash = store_ ? store_->put_blob(out.body) : store::sha256_hex(out.body);
    return out;
  }
}

FetchOutcome Fetcher::fetch_live(const core::DomainKey& domain) {
  const std::string host = domain.original_host.empty() ? domain.registrable : domain.original_host;
  return fetch_url("http://" + host + "/");
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            next = n;
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

std::vector<FetchOutcome> Fetcher::fetch_live_all(const std::vector<core::DomainKey>& domains, std::size_t workers) {
  std::vector<std::optional<FetchOutcome>> slots(domains.size());
  parallel_for(domains.size(), workers, [&](std::size_t i) { slots[i].emplace(fetch_live(domains[i])); });
  std::vector<FetchOutcome> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<FetchOutcome> Fetcher::fetch_urls(const std::vector<std::string>& urls, std::size_t workers) {
  std::vector<std::optional<FetchOutcome>> slots(urls.size());
  parallel_for(urls.size(), workers, [&](std::size_t i) { slots[i].emplace(fetch_url(urls[i])); });
  std::vector<FetchOutcome> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace trackerlink::fetch
