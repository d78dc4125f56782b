#pragma once

#include <vector>

#include "trackerlink/core/model.hpp"
#include "trackerlink/graph/graph.hpp"

namespace trackerlink::graph {

struct DomainChange {
  core::DomainKey domain;
  std::vector<core::TrackingId> ids_added;    // sorted
  std::vector<core::TrackingId> ids_deleted;  // sorted
  std::vector<core::IdKind> kinds_added;      // kinds absent in w1 that appear in w2

  bool empty() const noexcept { return ids_added.empty() && ids_deleted.empty(); }
};

struct ChangeSummary {
  std::size_t domains_compared = 0;
  std::size_t adsense_deletions = 0;  // domains that dropped at least one AdSense id
  std::size_t ga_deletions = 0;       // domains that dropped at least one Analytics id
  std::size_t kind_additions = 0;     // domains that already had ids and gained a new kind
  std::size_t networks_dissolved = 0;
  std::size_t networks_new = 0;
};

struct ChangeReport {
  std::string from_wave;
  std::string to_wave;
  std::vector<DomainChange> domains;  // changed domains only, sorted
  std::vector<Network> networks_dissolved;
  std::vector<Network> networks_new;
  ChangeSummary summary;

  bool empty() const noexcept { return domains.empty() && networks_dissolved.empty() && networks_new.empty(); }
};

/// Compare live state between two waves. Only domains scanned live in both
/// waves take part in the per-domain comparison.
ChangeReport diff_waves(const core::ScanWave& w1, const core::ScanWave& w2);

}  // namespace trackerlink::graph
