#include "trackerlink/core/url.hpp"

#include <cctype>
#include <charconv>
#include <vector>

#include "trackerlink/core/text.hpp"

namespace trackerlink::core {

namespace {

std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string> out;
  bool trailing_slash = path.ends_with("/") || path.ends_with("/.") || path.ends_with("/..");
  for (auto& seg : split(path, '/')) {
    if (seg.empty() || seg == ".") continue;
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
      continue;
    }
    out.push_back(seg);
  }
  std::string result;
  for (auto& seg : out) result += "/" + seg;
  if (result.empty() || trailing_slash) result += "/";
  return result;
}

}  // namespace

std::string Url::origin() const {
  std::string out = scheme + "://" + host;
  if (port != 0 && port != (scheme == "https" ? 443 : 80)) out += ":" + std::to_string(port);
  return out;
}

std::string Url::str() const { return origin() + target; }

std::optional<Url> parse_url(std::string_view text) {
  text = trim(text);
  auto sep = text.find("://");
  if (sep == std::string_view::npos || sep == 0) return std::nullopt;
  Url url;
  url.scheme = to_lower_ascii(text.substr(0, sep));
  if (url.scheme != "http" && url.scheme != "https") return std::nullopt;
  std::string_view rest = text.substr(sep + 3);
  auto path_start = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, path_start);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);

  std::string_view host = authority;
  if (authority.starts_with("[")) {
    auto close = authority.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    host = authority.substr(0, close + 1);
    authority.remove_prefix(close + 1);
    if (authority.starts_with(":")) {
      auto p = authority.substr(1);
      if (std::from_chars(p.data(), p.data() + p.size(), url.port).ec != std::errc{}) return std::nullopt;
    }
  } else if (auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    auto p = authority.substr(colon + 1);
    if (!p.empty() && std::from_chars(p.data(), p.data() + p.size(), url.port).ec != std::errc{})
      return std::nullopt;
  }
  if (host.empty()) return std::nullopt;
  url.host = to_lower_ascii(host);

  if (path_start != std::string_view::npos) {
    std::string_view target = rest.substr(path_start);
    if (auto hash = target.find('#'); hash != std::string_view::npos) target.remove_suffix(target.size() - hash);
    url.target = std::string(target);
    if (url.target.empty() || url.target.front() != '/') url.target.insert(url.target.begin(), '/');
  }
  return url;
}

std::optional<Url> resolve_url(const Url& base, std::string_view ref) {
  ref = trim(ref);
  ref = ref.substr(0, ref.find('#'));
  if (ref.find("://") != std::string_view::npos) {
    auto scheme_end = ref.find("://");
    auto first_special = ref.find_first_of("/?");
    if (first_special == std::string_view::npos || first_special > scheme_end) return parse_url(ref);
  }
  if (ref.starts_with("//")) return parse_url(base.scheme + ":" + std::string(ref));
  if (auto colon = ref.find(':'); colon != std::string_view::npos && ref.find_first_of("/?") > colon)
    return std::nullopt;  // javascript:, data:, mailto: ...

  Url out = base;
  if (ref.empty()) return out;
  if (ref.front() == '/') {
    auto q = ref.find('?');
    out.target = remove_dot_segments(ref.substr(0, q)) + std::string(q == std::string_view::npos ? "" : ref.substr(q));
    return out;
  }
  if (ref.front() == '?') {
    out.target = base.target.substr(0, base.target.find('?')) + std::string(ref);
    return out;
  }
  std::string base_path = base.target.substr(0, base.target.find('?'));
  base_path = base_path.substr(0, base_path.rfind('/') + 1);
  auto q = ref.find('?');
  out.target = remove_dot_segments(base_path + std::string(ref.substr(0, q))) +
               std::string(q == std::string_view::npos ? "" : ref.substr(q));
  return out;
}

std::string url_encode_component(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

}  // namespace trackerlink::core
