#include "trackerlink/graph/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace trackerlink::graph {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

}  // namespace

AttributionGraph build_graph(const std::string& name, const std::vector<core::Observation>& observations,
                             const std::vector<core::SeedEntry>& seeds) {
  AttributionGraph g;
  g.built_from = name;

  std::map<std::string, DomainNode> domains;
  std::set<core::TrackingId> ids;
  std::map<std::pair<std::string, core::TrackingId>, Edge> edges;

  for (const auto& obs : observations) {
    auto [it, inserted] = domains.try_emplace(obs.domain.registrable, DomainNode{obs.domain, false, std::nullopt});
    ids.insert(obs.id);
    auto& edge = edges.try_emplace({obs.domain.registrable, obs.id}, Edge{it->second.domain, obs.id, {}}).first->second;
    edge.provenance.insert(obs.provenance.cls);
  }
  for (const auto& seed : seeds) {
    auto it = domains.find(seed.domain.registrable);
    if (it == domains.end()) continue;
    it->second.is_seed = true;
    if (seed.category) it->second.category = seed.category;
  }

  for (auto& [_, node] : domains) g.domains.push_back(std::move(node));
  g.ids.assign(ids.begin(), ids.end());
  for (auto& [_, edge] : edges) g.edges.push_back(std::move(edge));
  return g;
}

AttributionGraph build_graph(const core::ScanWave& wave) {
  return build_graph(wave.name, wave.observations, wave.seeds);
}

std::vector<Network> project_networks(const AttributionGraph& g) {
  const std::size_t nd = g.domains.size();
  std::map<std::string, std::size_t> domain_index;
  for (std::size_t i = 0; i < nd; ++i) domain_index[g.domains[i].domain.registrable] = i;
  std::map<core::TrackingId, std::size_t> id_index;
  for (std::size_t i = 0; i < g.ids.size(); ++i) id_index[g.ids[i]] = nd + i;

  DisjointSets sets(nd + g.ids.size());
  std::map<core::TrackingId, std::size_t> id_degree;
  for (const auto& e : g.edges) {
    sets.unite(domain_index.at(e.domain.registrable), id_index.at(e.id));
    ++id_degree[e.id];
  }

  std::map<std::size_t, Network> by_root;
  for (std::size_t i = 0; i < nd; ++i) {
    auto& net = by_root[sets.find(i)];
    net.members.push_back(g.domains[i].domain);
    if (g.domains[i].is_seed) net.seed_members.push_back(g.domains[i].domain);
  }
  for (std::size_t i = 0; i < g.ids.size(); ++i) {
    auto it = by_root.find(sets.find(nd + i));
    if (it == by_root.end()) continue;
    it->second.all_ids.push_back(g.ids[i]);
    if (id_degree[g.ids[i]] >= 2) it->second.linking_ids.push_back(g.ids[i]);
  }

  std::vector<Network> out;
  for (auto& [_, net] : by_root) {
    if (net.members.size() < 2) continue;
    std::sort(net.members.begin(), net.members.end());
    std::sort(net.seed_members.begin(), net.seed_members.end());
    std::sort(net.all_ids.begin(), net.all_ids.end());
    std::sort(net.linking_ids.begin(), net.linking_ids.end());
    net.network_id = net.members.front().registrable;
    out.push_back(std::move(net));
  }
  std::sort(out.begin(), out.end(), [](const Network& a, const Network& b) {
    if (a.dimension() != b.dimension()) return a.dimension() > b.dimension();
    return a.network_id < b.network_id;
  });
  return out;
}

std::size_t singleton_domains(const AttributionGraph& g, const std::vector<Network>& networks) {
  std::size_t in_networks = 0;
  for (const auto& n : networks) in_networks += n.dimension();
  return g.domains.size() - in_networks;
}

}  // namespace trackerlink::graph
