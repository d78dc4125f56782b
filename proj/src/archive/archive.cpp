#include "trackerlink/archive/archive.hpp"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "trackerlink/core/text.hpp"
#include "trackerlink/core/url.hpp"

namespace trackerlink::archive {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string period_of(const SnapshotRef& r, Granularity g) {
  switch (g) {
    case Granularity::Month: return r.snapshot_ts.substr(0, 6);
    case Granularity::Year: return r.snapshot_ts.substr(0, 4);
    case Granularity::Every: return r.snapshot_ts;
  }
  return r.snapshot_ts;
}

// Erases [from, to) ranges found by `find_range` until none is left.
template <class F>
void erase_all(std::string& s, F find_range) {
  for (;;) {
    auto [b, e] = find_range(s);
    if (b == std::string::npos) return;
    s.erase(b, e - b);
  }
}

}  // namespace

core::Timestamp SnapshotRef::instant() const { return core::parse_archive_ts(snapshot_ts).value_or(core::Timestamp{}); }

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::Month: return "month";
    case Granularity::Year: return "year";
    case Granularity::Every: return "every";
  }
  return "month";
}

std::optional<Granularity> parse_granularity(std::string_view text) {
  const auto t = core::to_lower_ascii(text);
  if (t == "month" || t == "monthly") return Granularity::Month;
  if (t == "year" || t == "yearly") return Granularity::Year;
  if (t == "every" || t == "all") return Granularity::Every;
  return std::nullopt;
}

CdxParse parse_cdx_json(std::string_view body, const core::DomainKey& domain) {
  CdxParse out;
  if (core::trim(body).empty()) return out;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw CdxFormatError(std::string("CDX response is not JSON: ") + e.what());
  }
  if (!doc.is_array()) throw CdxFormatError("CDX response is not a JSON array");
  if (doc.empty()) return out;

  const auto& header = doc[0];
  bool header_ok = header.is_array() && header.size() == kCdxHeader.size();
  for (std::size_t i = 0; header_ok && i < kCdxHeader.size(); ++i)
    header_ok = header[i].is_string() && header[i].get<std::string>() == kCdxHeader[i];
  if (!header_ok) throw CdxFormatError("unexpected CDX header: " + header.dump());

  for (std::size_t n = 1; n < doc.size(); ++n) {
    const auto& row = doc[n];
    auto skip = [&](const std::string& why) {
      out.warnings.push_back("CDX row " + std::to_string(n) + " skipped: " + why);
    };
    if (!row.is_array() || row.size() != kCdxHeader.size()) {
      skip("expected 7 fields");
      continue;
    }
    if (!std::all_of(row.begin(), row.end(), [](const auto& c) { return c.is_string(); })) {
      skip("non-string field");
      continue;
    }
    SnapshotRef ref;
    ref.domain = domain;
    ref.snapshot_ts = row[1].get<std::string>();
    ref.original_url = row[2].get<std::string>();
    ref.mimetype = row[3].get<std::string>();
    const auto status = row[4].get<std::string>();
    ref.digest = row[5].get<std::string>();
    if (ref.snapshot_ts.size() != 14 || !all_digits(ref.snapshot_ts) || !core::parse_archive_ts(ref.snapshot_ts)) {
      skip("bad timestamp '" + ref.snapshot_ts + "'");
      continue;
    }
    if (!all_digits(status) || status.size() > 3) {
      skip("bad status '" + status + "'");
      continue;
    }
    ref.status_code = std::stoi(status);
    out.rows.push_back(std::move(ref));
  }
  return out;
}

bool is_root_capture(const SnapshotRef& ref) {
  if (ref.status_code != 200) return false;
  const auto mime = core::to_lower_ascii(ref.mimetype);
  if (mime.rfind("text/html", 0) != 0 && mime.rfind("application/xhtml", 0) != 0) return false;
  auto url = core::parse_url(ref.original_url);
  if (!url || (url->target != "/" && !url->target.empty())) return false;
  const auto& reg = ref.domain.registrable;
  return url->host == reg || url->host == "www." + reg;
}

std::vector<SnapshotRef> sample_snapshots(std::vector<SnapshotRef> refs, const SamplingPolicy& policy) {
  std::stable_sort(refs.begin(), refs.end(),
                   [](const SnapshotRef& a, const SnapshotRef& b) { return a.snapshot_ts < b.snapshot_ts; });
  std::set<std::string> digests, periods;
  std::vector<SnapshotRef> kept;
  for (auto& r : refs) {
    if (!r.digest.empty() && !digests.insert(r.digest).second) continue;
    if (!periods.insert(period_of(r, policy.granularity)).second) continue;
    kept.push_back(std::move(r));
  }
  const std::size_t cap = policy.max_snapshots;
  if (cap == 0 || kept.size() <= cap) return kept;
  std::vector<SnapshotRef> thinned;
  thinned.reserve(cap);
  if (cap == 1) {
    thinned.push_back(std::move(kept.front()));
    return thinned;
  }
  const std::size_t n = kept.size();
  for (std::size_t i = 0; i < cap; ++i) thinned.push_back(std::move(kept[(i * (n - 1) + (cap - 1) / 2) / (cap - 1)]));
  return thinned;
}

std::string cdx_query_url(std::string_view endpoint, const core::DomainKey& domain, std::string_view from_ts,
                          std::string_view to_ts) {
  std::string url(endpoint);
  while (!url.empty() && url.back() == '/') url.pop_back();
  url += "/cdx/search/cdx?url=" + core::url_encode_component(domain.registrable) + "&matchType=domain";
  if (!from_ts.empty()) url += "&from=" + std::string(from_ts);
  if (!to_ts.empty()) url += "&to=" + std::string(to_ts);
  url += "&filter=statuscode:200&output=json";
  return url;
}

std::string snapshot_url(std::string_view endpoint, std::string_view ts, std::string_view original_url) {
  std::string url(endpoint);
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url + "/web/" + std::string(ts) + "id_/" + std::string(original_url);
}

std::string strip_archive_markup(std::string_view body) {
  std::string s(body);
  erase_all(s, [](const std::string& t) -> std::pair<std::size_t, std::size_t> {
    const auto b = t.find("<!-- BEGIN WAYBACK TOOLBAR INSERT -->");
    if (b == std::string::npos) return {b, b};
    constexpr std::string_view end = "<!-- END WAYBACK TOOLBAR INSERT -->";
    const auto e = t.find(end, b);
    return {b, e == std::string::npos ? t.size() : e + end.size()};
  });
  // Playback head block: starts with the archive's analytics include, ends
  // with a marker comment.
  erase_all(s, [](const std::string& t) -> std::pair<std::size_t, std::size_t> {
    constexpr std::string_view end = "<!-- End Wayback Rewrite JS Include -->";
    const auto e = t.find(end);
    if (e == std::string::npos) return {std::string::npos, 0};
    auto b = t.rfind("<script", e);
    const auto a = t.rfind("archive.org/includes/analytics.js", e);
    if (a != std::string::npos) b = t.rfind("<script", a);
    return {b == std::string::npos ? e : b, e + end.size()};
  });
  erase_all(s, [](const std::string& t) -> std::pair<std::size_t, std::size_t> {
    for (std::size_t pos = t.find("<script"); pos != std::string::npos; pos = t.find("<script", pos + 1)) {
      const auto gt = t.find('>', pos);
      if (gt == std::string::npos) break;
      const std::string_view open(t.data() + pos, gt - pos);
      if (open.find("/_static/") == std::string_view::npos && open.find("archive.org/includes/") == std::string_view::npos)
        continue;
      const auto close = t.find("</script>", gt);
      return {pos, close == std::string::npos ? gt + 1 : close + 9};
    }
    return {std::string::npos, 0};
  });
  return s;
}

namespace {

fetch::FetchConfig archive_fetch_config(const ArchiveConfig& c) {
  fetch::FetchConfig f;
  f.user_agent = c.user_agent;
  f.retries = c.throttle_retries;
  f.backoff_base = c.backoff_base;
  // The CDX and raw-content endpoints are the archive's programmatic API.
  f.respect_robots = false;
  return f;
}

}  // namespace

ArchiveClient::ArchiveClient(fetch::HttpClient& http, fetch::PolitenessGate& gate, ArchiveConfig config,
                             store::Store* store)
    : config_(std::move(config)), fetcher_(http, archive_fetch_config(config_), gate, store) {
  gate.set_key_limit(kArchiveGateKey, kArchiveConcurrency);
  fetcher_.set_gate_key(kArchiveGateKey);
}

Expected<SnapshotList, ArchiveError> ArchiveClient::list_snapshots(const core::DomainKey& domain,
                                                                   std::string_view from_ts, std::string_view to_ts) {
  return list_snapshots(domain, from_ts, to_ts, config_.sampling);
}

Expected<SnapshotList, ArchiveError> ArchiveClient::list_snapshots(const core::DomainKey& domain,
                                                                   std::string_view from_ts, std::string_view to_ts,
                                                                   const SamplingPolicy& sampling) {
  if (!from_ts.empty() && !to_ts.empty()) {
    auto a = core::parse_archive_ts(from_ts), b = core::parse_archive_ts(to_ts);
    if (!a || !b || *a > *b)
      return unexpected(ArchiveError{fetch::FailureReason::InvalidUrl,
                                     "bad range " + std::string(from_ts) + ".." + std::string(to_ts), 0});
  }
  auto r = fetcher_.fetch_url(cdx_query_url(config_.endpoint, domain, from_ts, to_ts));
  if (!r) return unexpected(ArchiveError{r.error().reason, r.error().detail, r.error().status_code});
  CdxParse parsed;
  try {
    parsed = parse_cdx_json(r->body, domain);
  } catch (const CdxFormatError& e) {
    return unexpected(ArchiveError{fetch::FailureReason::Transport, e.what(), r->status_code});
  }
  for (const auto& w : parsed.warnings) spdlog::warn("{}: {}", domain.registrable, w);
  SnapshotList out;
  out.raw_rows = parsed.rows.size();
  out.warnings = std::move(parsed.warnings);
  std::vector<SnapshotRef> roots;
  for (auto& row : parsed.rows)
    if (is_root_capture(row)) roots.push_back(std::move(row));
  out.refs = sample_snapshots(std::move(roots), sampling);
  return out;
}

fetch::FetchOutcome ArchiveClient::fetch_archived(std::string_view ts, std::string_view url) {
  return fetcher_.fetch_url(snapshot_url(config_.endpoint, ts, url));
}

fetch::FetchOutcome ArchiveClient::fetch_snapshot(const SnapshotRef& ref) {
  return fetch_archived(ref.snapshot_ts, ref.original_url);
}

std::vector<core::Observation> HistoryScan::observations() const {
  std::vector<core::Observation> out;
  for (const auto& s : snapshots) out.insert(out.end(), s.observations.begin(), s.observations.end());
  return out;
}

std::size_t HistoryScan::fetched() const {
  return std::count_if(snapshots.begin(), snapshots.end(), [](const SnapshotScan& s) { return s.fetched; });
}

std::size_t HistoryScan::skipped() const { return snapshots.size() - fetched(); }

HistoryScan scan_history(ArchiveClient& client, const core::DomainKey& domain, std::string_view from_ts,
                         std::string_view to_ts, const extract::ExtractorConfig& extractor) {
  HistoryScan out;
  out.domain = domain;
  auto listed = client.list_snapshots(domain, from_ts, to_ts);
  if (!listed) {
    spdlog::warn("{}: snapshot listing failed: {}", domain.registrable, listed.error().detail);
    out.error = listed.error();
    return out;
  }
  out.listed = listed->raw_rows;
  out.warnings = listed->warnings;

  for (const auto& ref : listed->refs) {
    SnapshotScan scan;
    scan.ref = ref;
    auto page = client.fetch_snapshot(ref);
    if (!page) {
      const auto& f = page.error();
      scan.skip_reason = f.status_code == 404 ? "404" : fetch::to_string(f.reason);
      spdlog::info("{}: snapshot {} skipped ({})", domain.registrable, ref.snapshot_ts, f.detail);
      out.snapshots.push_back(std::move(scan));
      continue;
    }
    scan.fetched = true;
    const auto prov = core::Provenance::archive(ref.snapshot_ts);
    const auto body = strip_archive_markup(page->body);
    auto hits = extract::extract_ids(body, ref.original_url, extractor);
    auto batch = extract::hits_to_observations(hits, domain, prov, extractor, page->fetched_at, page->body_hash);
    std::vector<core::Observation> all = std::move(batch.observations);

    scan.script_urls = extract::same_domain_scripts(body, ref.original_url, extractor);
    for (const auto& script : scan.script_urls) {
      auto js = client.fetch_archived(ref.snapshot_ts, script);
      if (!js) continue;
      auto script_hits = extract::extract_ids(js->body, script, extractor);
      auto b = extract::hits_to_observations(script_hits, domain, prov, extractor, js->fetched_at, js->body_hash);
      all.insert(all.end(), b.observations.begin(), b.observations.end());
    }
    scan.observations = core::deduplicate(all);
    out.snapshots.push_back(std::move(scan));
  }
  return out;
}

}  // namespace trackerlink::archive
