#pragma once

#include "json.hpp"
#include <string>

#include "trackerlink/core/model.hpp"

namespace trackerlink::store {

/// One observation-log record. Field set:
/// `wave, domain, host, id_kind, id_account, id_suffix?, observed_at,
///  provenance, snapshot_ts?, provider?, source_url, blob_hash`.
nlohmann::json observation_to_json(const std::string& wave, const core::Observation& obs);

struct WaveObservation {
  std::string wave;
  core::Observation observation;
};

/// Throws std::invalid_argument on missing or malformed fields.
WaveObservation observation_from_json(const nlohmann::json& j);

nlohmann::json seed_to_json(const core::SeedEntry& seed);
core::SeedEntry seed_from_json(const nlohmann::json& j, const std::string& wave);

}  // namespace trackerlink::store
