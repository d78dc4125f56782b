#pragma once

// Independent reference for network projection: pairwise shared-id adjacency
// followed by a Warshall transitive closure on a boolean matrix. Deliberately
// shares no code with the union-find implementation.

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trackerlink/core/model.hpp"

namespace tl_oracle {

struct Instance {
  std::vector<std::string> domains;                      // all domain names
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (domain index, id index)
  std::size_t id_count = 0;
};

inline Instance random_instance(std::mt19937& rng, std::size_t max_domains = 100, std::size_t max_ids = 30) {
  Instance inst;
  std::uniform_int_distribution<std::size_t> nd(1, max_domains), ni(1, max_ids);
  const std::size_t d = nd(rng);
  inst.id_count = ni(rng);
  for (std::size_t i = 0; i < d; ++i) inst.domains.push_back("d" + std::to_string(1000 + i) + ".sk");
  // Vary density so both sparse and near-complete instances show up.
  std::uniform_real_distribution<double> dens(0.0, 0.08);
  const double p = dens(rng);
  std::bernoulli_distribution coin(p);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < inst.id_count; ++b)
      if (coin(rng)) inst.edges.emplace_back(a, b);
  return inst;
}

inline trackerlink::core::TrackingId id_for(std::size_t i) {
  return *trackerlink::core::normalize_id("UA-" + std::to_string(100000 + i) + "-1");
}

inline std::vector<trackerlink::core::Observation> to_observations(const Instance& inst) {
  std::vector<trackerlink::core::Observation> out;
  for (auto [a, b] : inst.edges)
    out.push_back({trackerlink::core::DomainKey(inst.domains[a]), id_for(b), {}, trackerlink::core::Provenance::live(), "", ""});
  return out;
}

/// Domain groups of size >= 2 under the transitive closure of "shares an id".
inline std::set<std::set<std::string>> closure_components(const Instance& inst) {
  const std::size_t n = inst.domains.size();
  std::vector<std::set<std::size_t>> ids_of(n);
  std::vector<bool> has_edge(n, false);
  for (auto [a, b] : inst.edges) {
    ids_of[a].insert(b);
    has_edge[a] = true;
  }
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    reach[i][i] = 1;
    for (std::size_t j = i + 1; j < n; ++j)
      for (auto id : ids_of[i])
        if (ids_of[j].count(id)) {
          reach[i][j] = reach[j][i] = 1;
          break;
        }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;

  std::set<std::set<std::string>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!has_edge[i]) continue;
    std::set<std::string> group;
    for (std::size_t j = 0; j < n; ++j)
      if (reach[i][j]) group.insert(inst.domains[j]);
    if (group.size() >= 2) out.insert(group);
  }
  return out;
}

}  // namespace tl_oracle
