#include "trackerlink/extract/extractor.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "trackerlink/core/text.hpp"
#include "trackerlink/core/url.hpp"

namespace trackerlink::extract {

namespace {

bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit_or_x(char c) { return (c >= '0' && c <= '9') || c == 'X' || c == 'x'; }
bool is_upper_alnum(char c) { return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z'); }

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
  return true;
}

template <class Pred>
std::size_t run_length(std::string_view s, std::size_t pos, std::size_t max, Pred pred) {
  std::size_t n = 0;
  while (pos + n < s.size() && n <= max && pred(s[pos + n])) ++n;
  return n;
}

bool right_boundary(std::string_view s, std::size_t end) { return end >= s.size() || !is_word(s[end]); }

// Each matcher returns the token length at `pos`, or nothing.

// UA-<digits>-<suffix>; X's are captured so placeholders surface as rejects.
std::optional<std::size_t> match_ua(std::string_view s, std::size_t pos) {
  if (!starts_with_ci(s, pos, "ua-")) return std::nullopt;
  std::size_t p = pos + 3;
  std::size_t account = run_length(s, p, 12, is_digit_or_x);
  if (account == 0 || account > 12) return std::nullopt;
  p += account;
  if (p >= s.size() || s[p] != '-') return std::nullopt;
  ++p;
  std::size_t suffix = run_length(s, p, 4, is_digit_or_x);
  if (suffix == 0 || suffix > 4) return std::nullopt;
  p += suffix;
  if (!right_boundary(s, p)) return std::nullopt;
  return p - pos;
}

std::optional<std::size_t> match_pub(std::string_view s, std::size_t pos) {
  std::size_t p = pos;
  if (starts_with_ci(s, p, "ca-pub-"))
    p += 7;
  else if (starts_with_ci(s, p, "pub-"))
    p += 4;
  else
    return std::nullopt;
  std::size_t account = run_length(s, p, 24, is_digit_or_x);
  if (account == 0 || account > 24) return std::nullopt;
  p += account;
  if (!right_boundary(s, p)) return std::nullopt;
  return p - pos;
}

std::optional<std::size_t> match_token(std::string_view s, std::size_t pos, std::string_view prefix,
                                       std::size_t min_len, std::size_t max_len) {
  if (s.compare(pos, prefix.size(), prefix) != 0) return std::nullopt;
  std::size_t p = pos + prefix.size();
  std::size_t len = run_length(s, p, max_len, is_upper_alnum);
  if (len < min_len || len > max_len) return std::nullopt;
  p += len;
  if (!right_boundary(s, p)) return std::nullopt;
  return p - pos;
}

std::string make_snippet(std::string_view body, std::size_t start, std::size_t len) {
  constexpr std::size_t kSide = 48;
  std::size_t from = start > kSide ? start - kSide : 0;
  std::size_t to = std::min(body.size(), start + len + kSide);
  std::u32string text = core::decode_utf8_lossy(body.substr(from, to - from));
  for (auto& c : text)
    if (c < 0x20 || c == 0x7F) c = U' ';
  if (text.size() > kMaxContextChars) {
    std::size_t excess = text.size() - kMaxContextChars;
    text = text.substr(excess / 2, kMaxContextChars);
  }
  return core::encode_utf8(text);
}

}  // namespace

std::vector<RawIdHit> extract_ids(std::string_view body, std::string_view source_url, const ExtractorConfig& config) {
  std::vector<RawIdHit> hits;
  const std::string_view window = body.substr(0, std::min(body.size(), config.scan_window));
  const bool ga4 = config.normalize.enable_ga4;
  const bool gtm = config.normalize.enable_gtm;

  std::size_t pos = 0;
  while (pos < window.size()) {
    const char c = window[pos];
    const bool boundary = pos == 0 || !is_word(window[pos - 1]);
    std::optional<std::size_t> len;
    if (boundary) {
      switch (c) {
        case 'U':
        case 'u': len = match_ua(window, pos); break;
        case 'C':
        case 'c':
        case 'P':
        case 'p': len = match_pub(window, pos); break;
        case 'G':
          if (gtm) len = match_token(window, pos, "GTM-", 4, 10);
          if (!len && ga4) len = match_token(window, pos, "G-", 6, 12);
          break;
        default: break;
      }
    }
    if (!len) {
      ++pos;
      continue;
    }
    hits.push_back(RawIdHit{std::string(window.substr(pos, *len)), pos, make_snippet(window, pos, *len),
                            std::string(source_url)});
    pos += *len;
  }
  return hits;
}

ObservationBatch hits_to_observations(const std::vector<RawIdHit>& hits, const core::DomainKey& domain,
                                      const core::Provenance& provenance, const ExtractorConfig& config,
                                      core::Timestamp observed_at, std::string blob_hash) {
  ObservationBatch batch;
  std::set<core::ObservationKey> seen;
  for (const auto& hit : hits) {
    auto id = core::normalize_id(hit.raw_token, config.normalize);
    if (!id) {
      ++batch.rejected;
      ++batch.rejected_by_reason[id.error()];
      continue;
    }
    core::Observation obs{domain, *id, observed_at, provenance, hit.source_url, blob_hash};
    if (seen.insert(core::key_of(obs)).second) batch.observations.push_back(std::move(obs));
  }
  return batch;
}

std::vector<std::string> find_script_sources(std::string_view body, std::string_view page_url) {
  std::vector<std::string> out;
  auto base = core::parse_url(page_url);
  if (!base) return out;
  std::set<std::string> seen;

  const std::string lower = core::to_lower_ascii(body);
  std::size_t pos = 0;
  while ((pos = lower.find("<script", pos)) != std::string::npos) {
    auto tag_end = lower.find('>', pos);
    if (tag_end == std::string::npos) break;
    std::string_view tag(lower.data() + pos, tag_end - pos);
    std::size_t attr = 0;
    while ((attr = tag.find("src", attr)) != std::string_view::npos) {
      if (attr > 0 && !std::isspace(static_cast<unsigned char>(tag[attr - 1]))) {
        attr += 3;
        continue;
      }
      std::size_t p = attr + 3;
      while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
      if (p >= tag.size() || tag[p] != '=') {
        attr += 3;
        continue;
      }
      ++p;
      while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
      std::size_t value_start = p, value_end;
      if (p < tag.size() && (tag[p] == '"' || tag[p] == '\'')) {
        value_start = p + 1;
        value_end = tag.find(tag[p], value_start);
        if (value_end == std::string_view::npos) value_end = tag.size();
      } else {
        value_end = tag.find_first_of(" \t\r\n", p);
        if (value_end == std::string_view::npos) value_end = tag.size();
      }
      // Take the value from the original (case-preserving) body.
      std::string value(body.substr(pos + value_start, value_end - value_start));
      for (std::size_t amp; (amp = value.find("&amp;")) != std::string::npos;) value.replace(amp, 5, "&");
      if (auto resolved = core::resolve_url(*base, value)) {
        auto text = resolved->str();
        if (seen.insert(text).second) out.push_back(std::move(text));
      }
      break;
    }
    pos = tag_end;
  }
  return out;
}

std::vector<std::string> same_domain_scripts(std::string_view body, std::string_view page_url,
                                             const ExtractorConfig& config) {
  std::vector<std::string> out;
  if (config.script_follow_depth < 1 || config.script_cap == 0) return out;
  auto page_domain = core::try_registrable_domain(page_url);
  if (!page_domain) return out;
  for (auto& src : find_script_sources(body, page_url)) {
    auto d = core::try_registrable_domain(src);
    if (!d || *d != *page_domain) continue;
    out.push_back(std::move(src));
    if (out.size() >= config.script_cap) break;
  }
  return out;
}

}  // namespace trackerlink::extract
