#include "trackerlink/fetch/robots.hpp"

#include "trackerlink/core/text.hpp"

namespace trackerlink::fetch {

bool robots_pattern_matches(std::string_view pattern, std::string_view path) {
  bool anchored = false;
  if (!pattern.empty() && pattern.back() == '$') {
    anchored = true;
    pattern.remove_suffix(1);
  }
  // Iterative glob with backtracking to the last '*'.
  std::size_t p = 0, s = 0, star = std::string_view::npos, mark = 0;
  while (s < path.size()) {
    if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = s;
    } else if (p < pattern.size() && pattern[p] == path[s]) {
      ++p;
      ++s;
    } else if (p == pattern.size() && !anchored) {
      return true;  // prefix match
    } else if (star != std::string_view::npos) {
      p = star + 1;
      s = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

RobotsRules RobotsRules::parse(std::string_view text, std::string_view agent_token) {
  const std::string token = core::to_lower_ascii(agent_token);
  struct Group {
    std::vector<std::string> agents;
    std::vector<Rule> rules;
  };
  std::vector<Group> groups;
  bool last_was_agent = false;

  for (auto raw : core::split(text, '\n')) {
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = core::trim(line);
    auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    const std::string field = core::to_lower_ascii(core::trim(line.substr(0, colon)));
    const std::string value(core::trim(line.substr(colon + 1)));

    if (field == "user-agent") {
      if (!last_was_agent || groups.empty()) groups.emplace_back();
      groups.back().agents.push_back(core::to_lower_ascii(value));
      last_was_agent = true;
    } else if (field == "allow" || field == "disallow") {
      last_was_agent = false;
      if (groups.empty()) continue;
      // An empty Disallow allows everything; it adds no rule.
      if (value.empty()) continue;
      groups.back().rules.push_back({value, field == "allow"});
    } else {
      last_was_agent = false;
    }
  }

  RobotsRules out;
  bool matched = false;
  for (const auto& g : groups)
    for (const auto& a : g.agents)
      if (a != "*" && token.find(a) != std::string::npos) {
        out.rules_.insert(out.rules_.end(), g.rules.begin(), g.rules.end());
        matched = true;
      }
  if (!matched)
    for (const auto& g : groups)
      for (const auto& a : g.agents)
        if (a == "*") out.rules_.insert(out.rules_.end(), g.rules.begin(), g.rules.end());
  return out;
}

bool RobotsRules::allowed(std::string_view path) const {
  std::size_t best_len = 0;
  bool verdict = true;
  bool any = false;
  for (const auto& r : rules_) {
    if (!robots_pattern_matches(r.pattern, path)) continue;
    const std::size_t len = r.pattern.size();
    if (!any || len > best_len || (len == best_len && r.allow)) {
      best_len = len;
      verdict = r.allow;
      any = true;
    }
  }
  return verdict;
}

}  // namespace trackerlink::fetch
