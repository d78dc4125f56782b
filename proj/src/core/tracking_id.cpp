#include "trackerlink/core/tracking_id.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace trackerlink::core {

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool has_placeholder_x(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c == 'X'; });
}

bool all_alnum(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'Z');
  });
}

// Numeric account fields: any X is a placeholder, anything else non-digit is
// simply not an account.
std::optional<RejectReason> check_numeric(std::string_view account) {
  if (account.empty()) return RejectReason::Malformed;
  if (has_placeholder_x(account)) return RejectReason::Placeholder;
  if (!all_digits(account)) return RejectReason::NonNumeric;
  return std::nullopt;
}

Expected<TrackingId, RejectReason> parse_ua(std::string_view body) {
  std::string_view account = body;
  std::optional<std::uint32_t> suffix;
  if (auto dash = body.find('-'); dash != std::string_view::npos) {
    account = body.substr(0, dash);
    std::string_view rest = body.substr(dash + 1);
    if (auto err = check_numeric(account)) return unexpected(*err);
    if (has_placeholder_x(rest)) return unexpected(RejectReason::Placeholder);
    if (!all_digits(rest) || rest.size() > 4) return unexpected(RejectReason::Malformed);
    std::uint32_t value = 0;
    std::from_chars(rest.data(), rest.data() + rest.size(), value);
    suffix = value;
  }
  if (auto err = check_numeric(account)) return unexpected(*err);
  if (account.size() < 4 || account.size() > 10) return unexpected(RejectReason::BadLength);
  if (account.front() == '0') return unexpected(RejectReason::LeadingZero);
  return TrackingId(IdKind::GaUa, std::string(account), suffix);
}

Expected<TrackingId, RejectReason> parse_pub(std::string_view account) {
  if (auto err = check_numeric(account)) return unexpected(*err);
  if (account.size() != 16) return unexpected(RejectReason::BadLength);
  return TrackingId(IdKind::AdsensePub, std::string(account));
}

Expected<TrackingId, RejectReason> parse_token(IdKind kind, std::string_view token, std::size_t min_len,
                                                std::size_t max_len) {
  if (token.empty()) return unexpected(RejectReason::Malformed);
  if (std::all_of(token.begin(), token.end(), [](char c) { return c == 'X'; }))
    return unexpected(RejectReason::Placeholder);
  if (!all_alnum(token)) return unexpected(RejectReason::Malformed);
  if (token.size() < min_len || token.size() > max_len) return unexpected(RejectReason::BadLength);
  return TrackingId(kind, std::string(token));
}

Expected<TrackingId, RejectReason> parse_any(std::string_view raw) {
  std::string text = upper(trim(raw));
  std::string_view s = text;
  if (s.empty()) return unexpected(RejectReason::Empty);
  if (s.starts_with("CA-PUB-")) return parse_pub(s.substr(7));
  if (s.starts_with("PUB-")) return parse_pub(s.substr(4));
  if (s.starts_with("UA-")) return parse_ua(s.substr(3));
  if (s.starts_with("GTM-")) return parse_token(IdKind::Gtm, s.substr(4), 4, 10);
  if (s.starts_with("G-")) return parse_token(IdKind::GaG4, s.substr(2), 6, 12);
  return unexpected(RejectReason::UnknownPrefix);
}

}  // namespace

std::string_view to_string(IdKind kind) {
  switch (kind) {
    case IdKind::GaUa: return "GA_UA";
    case IdKind::GaG4: return "GA_G4";
    case IdKind::Gtm: return "GTM";
    case IdKind::AdsensePub: return "ADSENSE_PUB";
  }
  return "?";
}

std::optional<IdKind> parse_id_kind(std::string_view text) {
  for (IdKind k : {IdKind::GaUa, IdKind::GaG4, IdKind::Gtm, IdKind::AdsensePub})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::Empty: return "empty";
    case RejectReason::UnknownPrefix: return "unknown-prefix";
    case RejectReason::Placeholder: return "placeholder";
    case RejectReason::BadLength: return "bad-length";
    case RejectReason::NonNumeric: return "non-numeric";
    case RejectReason::LeadingZero: return "leading-zero";
    case RejectReason::Malformed: return "malformed";
    case RejectReason::KindDisabled: return "kind-disabled";
    case RejectReason::Blocklisted: return "blocklisted";
  }
  return "?";
}

TrackingId::TrackingId(IdKind kind, std::string account, std::optional<std::uint32_t> property_suffix)
    : kind_(kind), account_(std::move(account)), property_suffix_(property_suffix) {}

std::string TrackingId::canonical() const {
  switch (kind_) {
    case IdKind::GaUa: return "UA-" + account_;
    case IdKind::AdsensePub: return "pub-" + account_;
    case IdKind::GaG4: return "G-" + account_;
    case IdKind::Gtm: return "GTM-" + account_;
  }
  return account_;
}

std::string TrackingId::display() const {
  if (kind_ == IdKind::GaUa && property_suffix_) return canonical() + "-" + std::to_string(*property_suffix_);
  return canonical();
}

std::strong_ordering operator<=>(const TrackingId& a, const TrackingId& b) noexcept {
  if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
  return a.account_ <=> b.account_;
}

bool NormalizeOptions::kind_enabled(IdKind kind) const noexcept {
  switch (kind) {
    case IdKind::GaUa:
    case IdKind::AdsensePub: return true;
    case IdKind::GaG4: return enable_ga4;
    case IdKind::Gtm: return enable_gtm;
  }
  return false;
}

std::set<IdKind> enabled_kinds(const NormalizeOptions& options) {
  std::set<IdKind> out;
  for (IdKind k : {IdKind::GaUa, IdKind::GaG4, IdKind::Gtm, IdKind::AdsensePub})
    if (options.kind_enabled(k)) out.insert(k);
  return out;
}

Expected<TrackingId, RejectReason> normalize_id(std::string_view raw, const NormalizeOptions& options) {
  auto parsed = parse_any(raw);
  if (!parsed) return parsed;
  if (!options.kind_enabled(parsed->kind())) return unexpected(RejectReason::KindDisabled);
  const std::string raw_upper = upper(trim(raw));
  for (const auto& entry : options.placeholder_blocklist) {
    auto blocked = parse_any(entry);
    if (blocked ? *blocked == *parsed : upper(trim(entry)) == raw_upper) return unexpected(RejectReason::Blocklisted);
  }
  return parsed;
}

}  // namespace trackerlink::core
