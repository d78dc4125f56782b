#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace trackerlink::fetch {

/// The group of a robots.txt file that applies to one user agent.
class RobotsRules {
 public:
  /// `agent_token` is the product token matched against User-agent lines,
  /// case-insensitively. Falls back to the `*` group.
  static RobotsRules parse(std::string_view text, std::string_view agent_token);
  static RobotsRules allow_all() { return {}; }

  /// Longest matching rule wins; Allow wins ties. Supports `*` and `$`.
  bool allowed(std::string_view path) const;

  std::size_t rule_count() const noexcept { return rules_.size(); }

 private:
  struct Rule {
    std::string pattern;
    bool allow;
  };
  std::vector<Rule> rules_;
};

/// True if `path` matches a robots pattern (prefix semantics, `*` wildcard,
/// trailing `$` anchor).
bool robots_pattern_matches(std::string_view pattern, std::string_view path);

}  // namespace trackerlink::fetch
