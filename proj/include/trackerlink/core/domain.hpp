#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

namespace trackerlink::core {

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Linking key for websites: the registrable domain of a host.
///
/// Equality and ordering use `registrable` only; `original_host` records
/// what was actually observed (e.g. `www.panobcan.sk`).
struct DomainKey {
  std::string registrable;
  std::string original_host;

  DomainKey() = default;
  explicit DomainKey(std::string registrable_domain, std::string host = {})
      : registrable(std::move(registrable_domain)), original_host(std::move(host)) {
    if (original_host.empty()) original_host = registrable;
  }

  friend bool operator==(const DomainKey& a, const DomainKey& b) noexcept { return a.registrable == b.registrable; }
  friend std::strong_ordering operator<=>(const DomainKey& a, const DomainKey& b) noexcept {
    return a.registrable <=> b.registrable;
  }
};

/// Rule set from a public_suffix_list.dat file (wildcards and exceptions
/// supported, IDN rules matched in their punycode form).
class PublicSuffixList {
 public:
  static PublicSuffixList parse(std::string_view text);
  /// The snapshot compiled into this build.
  static const PublicSuffixList& builtin();

  const std::string& version() const noexcept { return version_; }
  std::size_t rule_count() const noexcept { return rules_.size(); }

  /// Public suffix of a lowercase ASCII host ("co.uk" for "a.b.co.uk").
  std::string public_suffix(std::string_view host) const;
  /// Suffix plus one label, or nullopt when the host is itself a suffix.
  std::optional<std::string> registrable(std::string_view host) const;

 private:
  enum class RuleType { Normal, Wildcard, Exception };
  std::unordered_map<std::string, RuleType> rules_;
  std::string version_;
};

/// Host part of a URL or bare host, lowercased, with IDN labels converted to
/// punycode. Throws DomainError when no host can be recovered.
std::string extract_host(std::string_view url_or_host);

bool is_ip_literal(std::string_view host);

/// Throws DomainError on unparseable input. IP literals and single-label
/// hosts are returned verbatim as their own key.
DomainKey registrable_domain(std::string_view url_or_host, const PublicSuffixList& psl = PublicSuffixList::builtin());
std::optional<DomainKey> try_registrable_domain(std::string_view url_or_host,
                                                const PublicSuffixList& psl = PublicSuffixList::builtin());

/// RFC 3492 encoding of one label (without the `xn--` prefix).
std::string punycode_encode(std::u32string_view label);

}  // namespace trackerlink::core

template <>
struct std::hash<trackerlink::core::DomainKey> {
  std::size_t operator()(const trackerlink::core::DomainKey& d) const noexcept {
    return std::hash<std::string>{}(d.registrable);
  }
};
