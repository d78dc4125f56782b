#include "trackerlink/graph/diff.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace trackerlink::graph {

namespace {

using IdSet = std::set<core::TrackingId>;

std::map<std::string, IdSet> live_ids(const core::ScanWave& w) {
  std::map<std::string, IdSet> out;
  for (const auto& o : w.observations)
    if (o.provenance.cls == core::ProvenanceClass::Live) out[o.domain.registrable].insert(o.id);
  return out;
}

std::map<std::string, core::DomainKey> scanned_domains(const core::ScanWave& w) {
  std::map<std::string, core::DomainKey> out;
  for (const auto& s : w.seeds)
    if (s.status == core::SeedStatus::Active) out.emplace(s.domain.registrable, s.domain);
  for (const auto& o : w.observations)
    if (o.provenance.cls == core::ProvenanceClass::Live) out.emplace(o.domain.registrable, o.domain);
  return out;
}

bool is_ga(core::IdKind k) { return k == core::IdKind::GaUa || k == core::IdKind::GaG4; }

}  // namespace

ChangeReport diff_waves(const core::ScanWave& w1, const core::ScanWave& w2) {
  ChangeReport r;
  r.from_wave = w1.name;
  r.to_wave = w2.name;

  const auto ids1 = live_ids(w1);
  const auto ids2 = live_ids(w2);
  const auto scanned1 = scanned_domains(w1);
  const auto scanned2 = scanned_domains(w2);
  static const IdSet kNone;

  for (const auto& [name, key] : scanned1) {
    if (!scanned2.count(name)) continue;
    ++r.summary.domains_compared;
    auto a_it = ids1.find(name);
    auto b_it = ids2.find(name);
    const IdSet& a = a_it == ids1.end() ? kNone : a_it->second;
    const IdSet& b = b_it == ids2.end() ? kNone : b_it->second;

    DomainChange ch;
    ch.domain = key;
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(ch.ids_added));
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(ch.ids_deleted));
    if (ch.empty()) continue;

    std::set<core::IdKind> kinds_a, kinds_b;
    for (const auto& id : a) kinds_a.insert(id.kind());
    for (const auto& id : b) kinds_b.insert(id.kind());
    for (auto k : kinds_b)
      if (!kinds_a.count(k)) ch.kinds_added.push_back(k);

    if (!a.empty() && !ch.kinds_added.empty()) ++r.summary.kind_additions;
    bool dropped_ads = false, dropped_ga = false;
    for (const auto& id : ch.ids_deleted) {
      dropped_ads |= id.kind() == core::IdKind::AdsensePub;
      dropped_ga |= is_ga(id.kind());
    }
    r.summary.adsense_deletions += dropped_ads;
    r.summary.ga_deletions += dropped_ga;
    r.domains.push_back(std::move(ch));
  }

  // Network level.
  IdSet live2;
  for (const auto& [_, s] : ids2) live2.insert(s.begin(), s.end());
  const auto nets1 = project_networks(build_graph(w1));
  const auto nets2 = project_networks(build_graph(w2));

  IdSet linking1;
  for (const auto& n : nets1) {
    linking1.insert(n.linking_ids.begin(), n.linking_ids.end());
    const bool any_live = std::any_of(n.linking_ids.begin(), n.linking_ids.end(),
                                      [&](const core::TrackingId& id) { return live2.count(id) > 0; });
    if (!any_live) r.networks_dissolved.push_back(n);
  }
  for (const auto& n : nets2) {
    const bool seen = std::any_of(n.linking_ids.begin(), n.linking_ids.end(),
                                  [&](const core::TrackingId& id) { return linking1.count(id) > 0; });
    if (!seen) r.networks_new.push_back(n);
  }
  r.summary.networks_dissolved = r.networks_dissolved.size();
  r.summary.networks_new = r.networks_new.size();
  return r;
}

}  // namespace trackerlink::graph
