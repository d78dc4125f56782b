#include "trackerlink/lookup/lookup.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "trackerlink/core/text.hpp"
#include "trackerlink/store/sha256.hpp"
#include "trackerlink/store/store.hpp"

namespace trackerlink::lookup {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::optional<Date> date_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) return std::nullopt;
  return core::parse_date(j[key].get<std::string>());
}

Date today() { return Date{std::chrono::floor<std::chrono::days>(core::now_utc())}; }

}  // namespace

bool LookupRecord::contains(const core::DomainKey& d) const {
  return std::any_of(domains.begin(), domains.end(), [&](const LookupDomain& x) { return x.domain == d; });
}

std::vector<LookupDomain> collapse_domains(const std::vector<std::pair<std::string, LookupDomain>>& raw) {
  std::map<std::string, LookupDomain> merged;
  for (const auto& [host, entry] : raw) {
    auto key = core::try_registrable_domain(host);
    if (!key) {
      spdlog::debug("lookup: dropping unparseable host '{}'", host);
      continue;
    }
    auto [it, fresh] = merged.try_emplace(key->registrable, LookupDomain{*key, entry.first_seen, entry.last_seen});
    if (fresh) continue;
    auto& m = it->second;
    if (entry.first_seen && (!m.first_seen || *entry.first_seen < *m.first_seen)) m.first_seen = entry.first_seen;
    if (entry.last_seen && (!m.last_seen || *entry.last_seen > *m.last_seen)) m.last_seen = entry.last_seen;
  }
  std::vector<LookupDomain> out;
  out.reserve(merged.size());
  for (auto& [_, d] : merged) out.push_back(std::move(d));
  return out;
}

std::string_view to_string(LookupErrorKind k) {
  switch (k) {
    case LookupErrorKind::Auth: return "AUTH";
    case LookupErrorKind::Quota: return "QUOTA";
    case LookupErrorKind::Transport: return "TRANSPORT";
    case LookupErrorKind::BadResponse: return "BAD_RESPONSE";
    case LookupErrorKind::Unsupported: return "UNSUPPORTED";
  }
  return "TRANSPORT";
}

// ---- fixture provider

FixtureProvider::FixtureProvider(fs::path dir, std::string name) : dir_(std::move(dir)), name_(std::move(name)) {}

Expected<RawResponse, LookupError> FixtureProvider::query(const core::TrackingId& id) {
  const fs::path path = dir_ / (id.canonical() + ".json");
  std::ifstream in(path, std::ios::binary);
  if (!in) return RawResponse{"", "not_found"};
  std::string body(std::istreambuf_iterator<char>(in), {});
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    return unexpected(LookupError{LookupErrorKind::BadResponse, path.string() + ": " + e.what()});
  }
  if (doc.contains("error")) {
    const auto what = doc["error"].get<std::string>();
    if (what == "auth") return unexpected(LookupError{LookupErrorKind::Auth, "fixture: auth rejected"});
    if (what == "quota") return unexpected(LookupError{LookupErrorKind::Quota, "fixture: quota exceeded"});
    return unexpected(LookupError{LookupErrorKind::Transport, "fixture: " + what});
  }
  const bool found = doc.contains("domains") && !doc["domains"].empty();
  return RawResponse{std::move(body), found ? "found" : "not_found"};
}

Expected<LookupRecord, LookupError> FixtureProvider::parse(const core::TrackingId& id, std::string_view raw) const {
  LookupRecord rec{id, {}, name_, {}, {}};
  if (core::trim(raw).empty()) return rec;
  try {
    const auto doc = json::parse(raw);
    std::vector<std::pair<std::string, LookupDomain>> entries;
    for (const auto& d : doc.value("domains", json::array())) {
      if (d.is_string()) {
        entries.push_back({d.get<std::string>(), {}});
        continue;
      }
      entries.push_back({d.at("domain").get<std::string>(),
                         LookupDomain{{}, date_field(d, "first_seen"), date_field(d, "last_seen")}});
    }
    rec.domains = collapse_domains(entries);
  } catch (const json::exception& e) {
    return unexpected(LookupError{LookupErrorKind::BadResponse, e.what()});
  }
  return rec;
}

// ---- SpyOnWeb

SpyOnWebProvider::SpyOnWebProvider(fetch::HttpClient& http, std::string token, std::string endpoint,
                                   std::string user_agent)
    : http_(http), token_(std::move(token)), endpoint_(std::move(endpoint)), user_agent_(std::move(user_agent)) {
  while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
}

std::unique_ptr<SpyOnWebProvider> SpyOnWebProvider::from_environment(fetch::HttpClient& http, std::string endpoint,
                                                                     std::string user_agent) {
  const char* token = std::getenv(kSpyOnWebTokenEnv);
  if (!token || !*token) return nullptr;
  return std::make_unique<SpyOnWebProvider>(http, token, std::move(endpoint), std::move(user_agent));
}

bool SpyOnWebProvider::supports(core::IdKind kind) const {
  return kind == core::IdKind::GaUa || kind == core::IdKind::AdsensePub;
}

Expected<RawResponse, LookupError> SpyOnWebProvider::query(const core::TrackingId& id) {
  if (!supports(id.kind()))
    return unexpected(LookupError{LookupErrorKind::Unsupported, std::string(core::to_string(id.kind()))});
  const std::string section = id.kind() == core::IdKind::GaUa ? "analytics" : "adsense";
  // The token is in the query string; never let this URL reach a log line.
  auto url = core::parse_url(endpoint_ + "/" + section + "/" + id.canonical() +
                             "?access_token=" + core::url_encode_component(token_));
  if (!url) return unexpected(LookupError{LookupErrorKind::Transport, "bad endpoint " + endpoint_});
  fetch::RequestOptions opts;
  opts.user_agent = user_agent_;
  auto r = http_.get(*url, opts);
  if (!r) return unexpected(LookupError{LookupErrorKind::Transport, fetch::to_string(r.error().reason)});
  if (r->status == 401 || r->status == 403)
    return unexpected(LookupError{LookupErrorKind::Auth, "HTTP " + std::to_string(r->status)});
  if (r->status == 429) return unexpected(LookupError{LookupErrorKind::Quota, "HTTP 429"});
  if (r->status == 404) return RawResponse{std::move(r->body), "not_found"};
  if (r->status >= 400) return unexpected(LookupError{LookupErrorKind::Transport, "HTTP " + std::to_string(r->status)});

  json doc;
  try {
    doc = json::parse(r->body);
  } catch (const json::exception&) {
    return unexpected(LookupError{LookupErrorKind::BadResponse, "response is not JSON"});
  }
  const auto status = doc.value("status", "");
  if (status == "error") {
    const auto message = doc.value("message", "");
    const auto lower = core::to_lower_ascii(message);
    if (lower.find("token") != std::string::npos || lower.find("auth") != std::string::npos)
      return unexpected(LookupError{LookupErrorKind::Auth, message});
    if (lower.find("limit") != std::string::npos || lower.find("quota") != std::string::npos)
      return unexpected(LookupError{LookupErrorKind::Quota, message});
    return unexpected(LookupError{LookupErrorKind::BadResponse, message});
  }
  return RawResponse{std::move(r->body), status == "found" ? "found" : "not_found"};
}

Expected<LookupRecord, LookupError> SpyOnWebProvider::parse(const core::TrackingId& id, std::string_view raw) const {
  LookupRecord rec{id, {}, name(), {}, {}};
  if (core::trim(raw).empty()) return rec;
  try {
    const auto doc = json::parse(raw);
    if (doc.value("status", "") != "found") return rec;
    const auto& result = doc.at("result");
    const char* section = id.kind() == core::IdKind::GaUa ? "analytics" : "adsense";
    if (!result.contains(section)) return rec;
    std::vector<std::pair<std::string, LookupDomain>> entries;
    for (auto& [key, block] : result[section].items()) {
      const auto found = block.value("found", 0), fetched = block.value("fetched", 0);
      if (found > fetched) spdlog::warn("spyonweb: {} lists {} domains, only {} returned", key, found, fetched);
      const auto items = block.value("items", json::object());
      for (auto& [host, seen] : items.items()) {
        LookupDomain d;
        if (seen.is_string()) d.last_seen = core::parse_date(seen.get<std::string>());
        entries.push_back({host, d});
      }
    }
    rec.domains = collapse_domains(entries);
  } catch (const json::exception& e) {
    return unexpected(LookupError{LookupErrorKind::BadResponse, e.what()});
  }
  return rec;
}

// ---- service

LookupService::LookupService(Provider& provider, store::Store* store, ServiceConfig config)
    : provider_(provider), store_(store), config_(config) {
  clock_ = [] { return core::now_utc(); };
  sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

Expected<LookupRecord, LookupError> LookupService::lookup(const core::TrackingId& id) {
  std::lock_guard lock(mu_);
  if (disabled_) return unexpected(*disabled_);
  if (!provider_.supports(id.kind()))
    return unexpected(LookupError{LookupErrorKind::Unsupported, provider_.name() + " has no " +
                                                                    std::string(core::to_string(id.kind())) + " lookups"});
  const auto now = clock_();
  const std::string pname = provider_.name();
  const std::string canonical = id.canonical();

  if (store_) {
    if (auto entry = store_->get_lookup(pname, canonical); entry && now - entry->retrieved_at < config_.cache_ttl) {
      if (auto raw = store_->get_blob(entry->blob_hash)) {
        auto rec = provider_.parse(id, *raw);
        if (rec) {
          rec->retrieved_at = entry->retrieved_at;
          rec->blob_hash = entry->blob_hash;
          ++cache_hits_;
          return rec;
        }
      }
    }
  }

  if (last_request_) {
    const auto since = std::chrono::steady_clock::now() - *last_request_;
    if (since < config_.min_interval)
      sleep_(std::chrono::duration_cast<std::chrono::milliseconds>(config_.min_interval - since));
  }
  auto raw = provider_.query(id);
  last_request_ = std::chrono::steady_clock::now();
  ++requests_;
  if (!raw) {
    if (raw.error().kind == LookupErrorKind::Auth) {
      spdlog::error("{}: authentication failed, provider disabled for this run", pname);
      disabled_ = raw.error();
    }
    return unexpected(raw.error());
  }
  std::string hash;
  if (store_) {
    store_->put_lookup(pname, canonical, raw->body, now, raw->status);
    hash = store::sha256_hex(raw->body);
  }
  auto rec = provider_.parse(id, raw->body);
  if (!rec) return rec;
  rec->retrieved_at = now;
  rec->blob_hash = std::move(hash);
  return rec;
}

// ---- relic filter

std::string_view to_string(RelicReason r) {
  switch (r) {
    case RelicReason::Blocklist: return "BLOCKLIST";
    case RelicReason::Stale: return "STALE";
    case RelicReason::Liveness: return "LIVENESS";
    case RelicReason::Self: return "SELF";
  }
  return "BLOCKLIST";
}

const std::vector<std::string>& default_relic_blocklist() {
  static const std::vector<std::string> list = {
      // web archives and caches
      "archive.org", "archive.ph", "archive.today", "archive.is", "webcache.googleusercontent.com",
      // hosted blogging and site-builder platforms
      "blogspot.com", "blogger.com", "wordpress.com", "livejournal.com", "tumblr.com", "wix.com", "weebly.com",
      "webnode.sk", "blog.sme.sk",
      // domain parking and aftermarket
      "sedoparking.com", "sedo.com", "parkingcrew.net", "bodis.com", "above.com", "dan.com", "hugedomains.com",
      "afternic.com", "undeveloped.com", "domainmarket.com", "parklogic.com", "smartname.com",
      // large hosts that embed many customers' tags
      "google.com", "googleusercontent.com", "facebook.com", "youtube.com", "translate.goog"};
  return list;
}

bool on_blocklist(const core::DomainKey& d, const std::vector<std::string>& blocklist) {
  const std::string& host = d.original_host.empty() ? d.registrable : d.original_host;
  for (const auto& entry : blocklist) {
    const auto e = core::to_lower_ascii(entry);
    for (const std::string* h : {&d.registrable, &host})
      if (*h == e || (h->size() > e.size() && h->compare(h->size() - e.size(), e.size(), e) == 0 &&
                      (*h)[h->size() - e.size() - 1] == '.'))
        return true;
  }
  return false;
}

FilterResult filter_relics(const LookupRecord& record, const RelicPolicy& policy, const RelicContext& context) {
  FilterResult out{record, {}};
  out.record.domains.clear();
  const Date run = context.run_date.ok() ? context.run_date : today();
  const auto cutoff = Date{run.year() - std::chrono::years(policy.horizon_years), run.month(),
                           run.month() == std::chrono::February && run.day() == std::chrono::day(29)
                               ? std::chrono::day(28)
                               : run.day()};

  for (const auto& d : record.domains) {
    std::optional<Removal> removal;
    if (policy.use_blocklist && on_blocklist(d.domain, policy.blocklist)) {
      removal = Removal{d.domain, RelicReason::Blocklist, "relic blocklist"};
    } else if (policy.drop_self && context.self.count(d.domain)) {
      removal = Removal{d.domain, RelicReason::Self, "queried domain itself"};
    } else if (policy.use_staleness && d.last_seen && *d.last_seen < cutoff) {
      removal = Removal{d.domain, RelicReason::Stale, "last seen " + core::format_date(*d.last_seen) + " before " +
                                                          core::format_date(cutoff)};
    } else if (policy.verify_live && context.is_live && !context.is_live(d.domain)) {
      removal = Removal{d.domain, RelicReason::Liveness, "liveness probe failed"};
    }
    if (removal) {
      spdlog::info("relic filter: {} dropped from {} ({}: {})", d.domain.registrable, record.id.canonical(),
                   to_string(removal->reason), removal->detail);
      out.removals.push_back(std::move(*removal));
    } else {
      out.record.domains.push_back(d);
    }
  }
  return out;
}

// ---- expansion

ExpandResult expand(const core::ScanWave& wave, LookupService& service, const ExpandConfig& config) {
  ExpandResult out;
  const int depth = std::clamp(config.depth, 1, kMaxExpandDepth);

  std::set<core::DomainKey> known;
  for (const auto& s : wave.seeds) known.insert(s.domain);
  for (const auto& o : wave.observations) known.insert(o.domain);

  // Ids seen live on active seeds, with the domains that carried them.
  std::map<core::TrackingId, std::set<core::DomainKey>> carriers;
  const auto active = wave.active_seeds();
  const std::set<core::DomainKey> active_set(active.begin(), active.end());
  for (const auto& o : wave.observations)
    if (o.provenance.cls == core::ProvenanceClass::Live && active_set.count(o.domain)) carriers[o.id].insert(o.domain);

  std::map<core::DomainKey, bool> live_cache;
  auto is_live = [&](const core::DomainKey& d) {
    if (!config.is_live) return true;
    auto [it, fresh] = live_cache.try_emplace(d, false);
    if (fresh) it->second = config.is_live(d);
    return it->second;
  };

  std::set<core::TrackingId> looked_up;
  std::vector<core::TrackingId> frontier;
  for (const auto& [id, _] : carriers) frontier.push_back(id);

  for (int level = 1; level <= depth && !frontier.empty(); ++level) {
    std::vector<core::DomainKey> new_domains;
    for (const auto& id : frontier) {
      if (!looked_up.insert(id).second) continue;
      if (out.auth_failed) {
        out.gaps.push_back({id, LookupErrorKind::Auth, "provider disabled"});
        continue;
      }
      auto rec = service.lookup(id);
      if (!rec) {
        const auto& e = rec.error();
        if (e.kind == LookupErrorKind::Auth) out.auth_failed = true;
        if (e.kind != LookupErrorKind::Unsupported)
          spdlog::warn("lookup {} failed: {} {}", id.canonical(), to_string(e.kind), e.detail);
        out.gaps.push_back({id, e.kind, e.detail});
        continue;
      }
      RelicContext ctx{config.run_date, carriers[id], is_live};
      auto filtered = filter_relics(*rec, config.relic, ctx);
      out.removals.insert(out.removals.end(), filtered.removals.begin(), filtered.removals.end());
      for (const auto& d : filtered.record.domains) {
        out.observations.push_back(core::Observation{d.domain, id, filtered.record.retrieved_at,
                                                     core::Provenance::reverse_lookup(filtered.record.provider), "",
                                                     filtered.record.blob_hash});
        if (!known.count(d.domain) && out.discovered.insert(d.domain).second) new_domains.push_back(d.domain);
      }
      out.records.push_back(std::move(filtered.record));
    }

    frontier.clear();
    if (level == depth || !config.scan_domain) continue;
    std::set<core::TrackingId> next;
    for (const auto& d : new_domains) {
      for (auto& o : config.scan_domain(d)) {
        carriers[o.id].insert(o.domain);
        if (!looked_up.count(o.id)) next.insert(o.id);
        out.observations.push_back(std::move(o));
      }
    }
    frontier.assign(next.begin(), next.end());
  }
  return out;
}

}  // namespace trackerlink::lookup
