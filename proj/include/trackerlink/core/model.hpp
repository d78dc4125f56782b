#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trackerlink/core/domain.hpp"
#include "trackerlink/core/time.hpp"
#include "trackerlink/core/tracking_id.hpp"

namespace trackerlink::core {

enum class ProvenanceClass : std::uint8_t { Live, Archive, ReverseLookup };

std::string_view to_string(ProvenanceClass c);
std::optional<ProvenanceClass> parse_provenance_class(std::string_view text);

struct Provenance {
  ProvenanceClass cls = ProvenanceClass::Live;
  std::string snapshot_ts;  // Archive only, YYYYMMDDhhmmss
  std::string provider;     // ReverseLookup only

  static Provenance live() { return {}; }
  static Provenance archive(std::string ts) { return {ProvenanceClass::Archive, std::move(ts), {}}; }
  static Provenance reverse_lookup(std::string provider_name) {
    return {ProvenanceClass::ReverseLookup, {}, std::move(provider_name)};
  }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// One sighting of one id on one domain. Append-only fact.
struct Observation {
  DomainKey domain;
  TrackingId id;
  Timestamp observed_at;
  Provenance provenance;
  std::string source_url;
  std::string blob_hash;
};

/// Deduplication key used at query time: (domain, identity, provenance class).
struct ObservationKey {
  std::string domain;
  TrackingId id;
  ProvenanceClass cls;

  friend auto operator<=>(const ObservationKey&, const ObservationKey&) = default;
  friend bool operator==(const ObservationKey&, const ObservationKey&) = default;
};

ObservationKey key_of(const Observation& obs);

/// Keeps the first observation for each (domain, identity, provenance class),
/// preserving input order.
std::vector<Observation> deduplicate(const std::vector<Observation>& observations);

enum class SeedStatus : std::uint8_t { Active, Dead, NonTargetLanguage, PlatformManaged };

std::string_view to_string(SeedStatus s);
std::optional<SeedStatus> parse_seed_status(std::string_view text);

struct SeedEntry {
  DomainKey domain;
  SeedStatus status = SeedStatus::Active;
  std::optional<std::string> category;
  std::string wave;
};

struct ScanWave {
  std::string name;
  Timestamp started_at{};
  std::optional<Timestamp> finished_at;
  std::vector<SeedEntry> seeds;
  std::vector<Observation> observations;

  bool finished() const noexcept { return finished_at.has_value(); }
  std::vector<DomainKey> active_seeds() const;
  bool is_seed(const DomainKey& d) const;
};

}  // namespace trackerlink::core
