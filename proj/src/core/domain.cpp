#include "trackerlink/core/domain.hpp"

#include "trackerlink/core/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <vector>

namespace trackerlink::core {

namespace detail {
std::string_view embedded_public_suffix_version();
const std::string& embedded_public_suffix_list();
}  // namespace detail

namespace {

std::vector<std::string_view> split_labels(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (start <= host.size()) {
    auto dot = host.find('.', start);
    if (dot == std::string_view::npos) dot = host.size();
    labels.push_back(host.substr(start, dot - start));
    start = dot + 1;
  }
  return labels;
}

std::string join_from(const std::vector<std::string_view>& labels, std::size_t first) {
  std::string out;
  for (std::size_t i = first; i < labels.size(); ++i) {
    if (!out.empty()) out += '.';
    out += labels[i];
  }
  return out;
}

std::string to_ascii_label(std::string_view label) {
  bool ascii = std::all_of(label.begin(), label.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
  if (ascii) return std::string(label);
  return "xn--" + punycode_encode(decode_utf8_lossy(label));
}

std::string to_ascii_host(std::string_view host) {
  std::string out;
  for (auto label : split_labels(host)) {
    if (!out.empty()) out += '.';
    out += to_ascii_label(label);
  }
  return out;
}

bool valid_ascii_host(std::string_view host) {
  if (host.empty() || host.size() > 253) return false;
  for (auto label : split_labels(host)) {
    if (label.empty() || label.size() > 63) return false;
    for (char c : label)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) return false;
  }
  return true;
}

}  // namespace

std::string punycode_encode(std::u32string_view input) {
  constexpr std::uint32_t base = 36, tmin = 1, tmax = 26, skew = 38, damp = 700, initial_bias = 72,
                          initial_n = 128;
  auto digit = [](std::uint32_t d) { return static_cast<char>(d < 26 ? 'a' + d : '0' + (d - 26)); };
  auto adapt = [&](std::uint32_t delta, std::uint32_t numpoints, bool first) {
    delta = first ? delta / damp : delta / 2;
    delta += delta / numpoints;
    std::uint32_t k = 0;
    while (delta > ((base - tmin) * tmax) / 2) {
      delta /= base - tmin;
      k += base;
    }
    return k + (base - tmin + 1) * delta / (delta + skew);
  };

  std::string out;
  for (char32_t c : input)
    if (c < 0x80) out += static_cast<char>(c);
  const std::uint32_t basic = static_cast<std::uint32_t>(out.size());
  std::uint32_t handled = basic;
  if (basic > 0) out += '-';

  std::uint32_t n = initial_n, delta = 0, bias = initial_bias;
  while (handled < input.size()) {
    std::uint32_t m = UINT32_MAX;
    for (char32_t c : input)
      if (c >= n && c < m) m = c;
    delta += (m - n) * (handled + 1);
    n = m;
    for (char32_t c : input) {
      if (c < n) ++delta;
      if (c == n) {
        std::uint32_t q = delta;
        for (std::uint32_t k = base;; k += base) {
          std::uint32_t t = k <= bias ? tmin : k >= bias + tmax ? tmax : k - bias;
          if (q < t) break;
          out += digit(t + (q - t) % (base - t));
          q = (q - t) / (base - t);
        }
        out += digit(q);
        bias = adapt(delta, handled + 1, handled == basic);
        delta = 0;
        ++handled;
      }
    }
    ++delta;
    ++n;
  }
  return out;
}

PublicSuffixList PublicSuffixList::parse(std::string_view text) {
  PublicSuffixList psl;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;

    if (line.starts_with("// VERSION:")) {
      auto v = line.substr(11);
      while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
      while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
      psl.version_ = std::string(v);
      continue;
    }
    if (line.starts_with("//")) continue;
    auto end = line.find_first_of(" \t\r");
    std::string_view rule = line.substr(0, end);
    if (rule.empty()) continue;

    RuleType type = RuleType::Normal;
    if (rule.starts_with("!")) {
      type = RuleType::Exception;
      rule.remove_prefix(1);
    } else if (rule.starts_with("*.")) {
      type = RuleType::Wildcard;
      rule.remove_prefix(2);
    }
    std::string key = to_ascii_host(rule);
    std::transform(key.begin(), key.end(), key.begin(),
                   [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); });
    // A name can be both a plain suffix and a wildcard parent; keep both by
    // tagging wildcards separately.
    if (type == RuleType::Wildcard)
      psl.rules_["*." + key] = type;
    else
      psl.rules_[key] = type;
  }
  if (psl.version_.empty()) psl.version_ = "unversioned";
  return psl;
}

const PublicSuffixList& PublicSuffixList::builtin() {
  static const PublicSuffixList psl = [] {
    auto list = parse(detail::embedded_public_suffix_list());
    if (list.version_ == "unversioned") list.version_ = std::string(detail::embedded_public_suffix_version());
    return list;
  }();
  return psl;
}

std::string PublicSuffixList::public_suffix(std::string_view host) const {
  const auto labels = split_labels(host);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string candidate = join_from(labels, i);
    if (auto it = rules_.find(candidate); it != rules_.end()) {
      if (it->second == RuleType::Exception) return join_from(labels, i + 1);
      return candidate;
    }
    if (i + 1 < labels.size() && rules_.contains("*." + join_from(labels, i + 1))) return candidate;
  }
  return std::string(labels.back());
}

std::optional<std::string> PublicSuffixList::registrable(std::string_view host) const {
  const std::string suffix = public_suffix(host);
  if (suffix.size() >= host.size()) return std::nullopt;
  std::string_view head = host.substr(0, host.size() - suffix.size() - 1);
  auto dot = head.rfind('.');
  std::string_view label = dot == std::string_view::npos ? head : head.substr(dot + 1);
  return std::string(label) + "." + suffix;
}

bool is_ip_literal(std::string_view host) {
  if (host.starts_with("[")) return true;
  auto labels = split_labels(host);
  if (labels.size() != 4) return false;
  for (auto l : labels) {
    if (l.empty() || l.size() > 3) return false;
    if (!std::all_of(l.begin(), l.end(), [](char c) { return c >= '0' && c <= '9'; })) return false;
    if (std::stoi(std::string(l)) > 255) return false;
  }
  return true;
}

std::string extract_host(std::string_view input) {
  std::string_view s = input;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw DomainError("empty host");

  if (auto scheme = s.find("://"); scheme != std::string_view::npos) {
    auto name = s.substr(0, scheme);
    if (name.empty() || !std::all_of(name.begin(), name.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
        }))
      throw DomainError("bad URL scheme in '" + std::string(input) + "'");
    s.remove_prefix(scheme + 3);
  } else if (s.starts_with("//")) {
    s.remove_prefix(2);
  }
  s = s.substr(0, s.find_first_of("/?#"));
  if (auto at = s.rfind('@'); at != std::string_view::npos) s.remove_prefix(at + 1);

  std::string host;
  if (s.starts_with("[")) {
    auto close = s.find(']');
    if (close == std::string_view::npos) throw DomainError("unterminated IPv6 literal");
    host = std::string(s.substr(0, close + 1));
  } else {
    if (auto colon = s.rfind(':'); colon != std::string_view::npos) {
      auto port = s.substr(colon + 1);
      if (!std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw DomainError("bad port in '" + std::string(input) + "'");
      s = s.substr(0, colon);
    }
    if (s.ends_with(".")) s.remove_suffix(1);
    host = to_ascii_host(s);
  }
  std::transform(host.begin(), host.end(), host.begin(),
                 [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); });
  if (!host.starts_with("[") && !valid_ascii_host(host))
    throw DomainError("unparseable host in '" + std::string(input) + "'");
  return host;
}

DomainKey registrable_domain(std::string_view url_or_host, const PublicSuffixList& psl) {
  std::string host = extract_host(url_or_host);
  if (is_ip_literal(host) || host.find('.') == std::string::npos) return DomainKey(host, host);
  auto reg = psl.registrable(host);
  if (!reg) throw DomainError("'" + host + "' is a public suffix, not a registrable domain");
  return DomainKey(*reg, host);
}

std::optional<DomainKey> try_registrable_domain(std::string_view url_or_host, const PublicSuffixList& psl) {
  try {
    return registrable_domain(url_or_host, psl);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace trackerlink::core
