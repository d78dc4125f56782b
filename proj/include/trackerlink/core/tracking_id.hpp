#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trackerlink/core/expected.hpp"

namespace trackerlink::core {

enum class IdKind : std::uint8_t { GaUa, GaG4, Gtm, AdsensePub };

std::string_view to_string(IdKind kind);
std::optional<IdKind> parse_id_kind(std::string_view text);

/// A normalized analytics or advertising account identifier.
///
/// Identity is (kind, account). The GA property suffix (`-1` in
/// `UA-12857229-1`) is kept for display only, so every property of one
/// account compares equal.
class TrackingId {
 public:
  TrackingId(IdKind kind, std::string account, std::optional<std::uint32_t> property_suffix = std::nullopt);

  IdKind kind() const noexcept { return kind_; }
  const std::string& account() const noexcept { return account_; }
  std::optional<std::uint32_t> property_suffix() const noexcept { return property_suffix_; }

  /// `UA-<account>`, `pub-<account>`, `G-<token>` or `GTM-<token>`.
  std::string canonical() const;
  /// Canonical form plus the property suffix when one was observed.
  std::string display() const;

  friend bool operator==(const TrackingId& a, const TrackingId& b) noexcept {
    return a.kind_ == b.kind_ && a.account_ == b.account_;
  }
  friend std::strong_ordering operator<=>(const TrackingId& a, const TrackingId& b) noexcept;

 private:
  IdKind kind_;
  std::string account_;
  std::optional<std::uint32_t> property_suffix_;
};

enum class RejectReason : std::uint8_t {
  Empty,
  UnknownPrefix,
  Placeholder,
  BadLength,
  NonNumeric,
  LeadingZero,
  Malformed,
  KindDisabled,
  Blocklisted,
};

std::string_view to_string(RejectReason reason);

struct NormalizeOptions {
  // GA4 measurement ids and GTM containers are outside the default scope.
  bool enable_ga4 = false;
  bool enable_gtm = false;
  // Literal ids that are known tutorial/demo values. Entries are compared by
  // identity when they normalize, otherwise case-insensitively as text.
  std::vector<std::string> placeholder_blocklist;

  bool kind_enabled(IdKind kind) const noexcept;
};

Expected<TrackingId, RejectReason> normalize_id(std::string_view raw, const NormalizeOptions& options = {});

/// Set of enabled kinds under `options`, in enum order.
std::set<IdKind> enabled_kinds(const NormalizeOptions& options);

}  // namespace trackerlink::core

template <>
struct std::hash<trackerlink::core::TrackingId> {
  std::size_t operator()(const trackerlink::core::TrackingId& id) const noexcept {
    return std::hash<std::string>{}(id.account()) * 31u + static_cast<std::size_t>(id.kind());
  }
};
