#include "trackerlink/core/model.hpp"

#include <algorithm>
#include <set>

namespace trackerlink::core {

std::string_view to_string(ProvenanceClass c) {
  switch (c) {
    case ProvenanceClass::Live: return "LIVE";
    case ProvenanceClass::Archive: return "ARCHIVE";
    case ProvenanceClass::ReverseLookup: return "REVERSE_LOOKUP";
  }
  return "?";
}

std::optional<ProvenanceClass> parse_provenance_class(std::string_view text) {
  for (auto c : {ProvenanceClass::Live, ProvenanceClass::Archive, ProvenanceClass::ReverseLookup})
    if (to_string(c) == text) return c;
  return std::nullopt;
}

ObservationKey key_of(const Observation& obs) { return {obs.domain.registrable, obs.id, obs.provenance.cls}; }

std::vector<Observation> deduplicate(const std::vector<Observation>& observations) {
  std::set<ObservationKey> seen;
  std::vector<Observation> out;
  for (const auto& obs : observations)
    if (seen.insert(key_of(obs)).second) out.push_back(obs);
  return out;
}

std::string_view to_string(SeedStatus s) {
  switch (s) {
    case SeedStatus::Active: return "ACTIVE";
    case SeedStatus::Dead: return "DEAD";
    case SeedStatus::NonTargetLanguage: return "NON_TARGET_LANGUAGE";
    case SeedStatus::PlatformManaged: return "PLATFORM_MANAGED";
  }
  return "?";
}

std::optional<SeedStatus> parse_seed_status(std::string_view text) {
  for (auto s : {SeedStatus::Active, SeedStatus::Dead, SeedStatus::NonTargetLanguage, SeedStatus::PlatformManaged})
    if (to_string(s) == text) return s;
  return std::nullopt;
}

std::vector<DomainKey> ScanWave::active_seeds() const {
  std::vector<DomainKey> out;
  for (const auto& s : seeds)
    if (s.status == SeedStatus::Active) out.push_back(s.domain);
  return out;
}

bool ScanWave::is_seed(const DomainKey& d) const {
  return std::any_of(seeds.begin(), seeds.end(), [&](const SeedEntry& s) { return s.domain == d; });
}

}  // namespace trackerlink::core
