#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trackerlink/core/model.hpp"

namespace trackerlink::graph {

struct DomainNode {
  core::DomainKey domain;
  bool is_seed = false;
  std::optional<std::string> category;
};

struct Edge {
  core::DomainKey domain;
  core::TrackingId id;
  std::set<core::ProvenanceClass> provenance;
};

/// Bipartite domain/id graph. Nodes and edges are kept sorted, so two graphs
/// built from the same observation set are identical.
struct AttributionGraph {
  std::string built_from;
  std::vector<DomainNode> domains;
  std::vector<core::TrackingId> ids;
  std::vector<Edge> edges;

  bool empty() const noexcept { return domains.empty() && ids.empty(); }
};

/// One domain node per domain with an observation, one id node per identity,
/// one edge per (domain, identity) carrying the union of provenance classes.
AttributionGraph build_graph(const core::ScanWave& wave);
AttributionGraph build_graph(const std::string& name, const std::vector<core::Observation>& observations,
                             const std::vector<core::SeedEntry>& seeds = {});

struct Network {
  std::string network_id;                    // lexicographically smallest member
  std::vector<core::DomainKey> members;      // sorted
  std::vector<core::TrackingId> linking_ids; // ids carried by >= 2 members, sorted
  std::vector<core::TrackingId> all_ids;     // every id in the component, sorted
  std::vector<core::DomainKey> seed_members; // sorted

  std::size_t dimension() const noexcept { return members.size(); }
};

/// Connected components of the bipartite graph with at least two domains,
/// sorted by (dimension desc, network_id asc).
std::vector<Network> project_networks(const AttributionGraph& g);

/// Number of domain nodes that belong to no network.
std::size_t singleton_domains(const AttributionGraph& g, const std::vector<Network>& networks);

}  // namespace trackerlink::graph
