#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace trackerlink::core {

struct Url {
  std::string scheme;  // lowercase, "http" or "https" in practice
  std::string host;    // lowercase
  int port = 0;        // 0 means the scheme default
  std::string target = "/";  // path + query, never empty

  int effective_port() const noexcept { return port != 0 ? port : (scheme == "https" ? 443 : 80); }
  /// scheme://host[:port]
  std::string origin() const;
  std::string str() const;
};

std::optional<Url> parse_url(std::string_view text);

/// RFC 3986 reference resolution (no dot-segment normalization beyond
/// merging relative paths).
std::optional<Url> resolve_url(const Url& base, std::string_view reference);

std::string url_encode_component(std::string_view s);

}  // namespace trackerlink::core
