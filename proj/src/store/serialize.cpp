#include "trackerlink/store/serialize.hpp"

#include <stdexcept>

namespace trackerlink::store {

using nlohmann::json;

json observation_to_json(const std::string& wave, const core::Observation& obs) {
  json j;
  j["wave"] = wave;
  j["domain"] = obs.domain.registrable;
  j["host"] = obs.domain.original_host;
  j["id_kind"] = std::string(core::to_string(obs.id.kind()));
  j["id_account"] = obs.id.account();
  if (obs.id.property_suffix()) j["id_suffix"] = *obs.id.property_suffix();
  j["observed_at"] = core::format_iso8601(obs.observed_at);
  j["provenance"] = std::string(core::to_string(obs.provenance.cls));
  if (obs.provenance.cls == core::ProvenanceClass::Archive) j["snapshot_ts"] = obs.provenance.snapshot_ts;
  if (obs.provenance.cls == core::ProvenanceClass::ReverseLookup) j["provider"] = obs.provenance.provider;
  j["source_url"] = obs.source_url;
  j["blob_hash"] = obs.blob_hash;
  return j;
}

namespace {

const std::string& require_string(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) throw std::invalid_argument(std::string("missing string field '") + field + "'");
  return it->get_ref<const std::string&>();
}

}  // namespace

WaveObservation observation_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  const auto& domain = require_string(j, "domain");
  std::string host = j.contains("host") && j["host"].is_string() ? j["host"].get<std::string>() : domain;

  auto kind = core::parse_id_kind(require_string(j, "id_kind"));
  if (!kind) throw std::invalid_argument("unknown id_kind");
  std::optional<std::uint32_t> suffix;
  if (auto it = j.find("id_suffix"); it != j.end()) {
    if (!it->is_number_unsigned()) throw std::invalid_argument("id_suffix is not an unsigned integer");
    suffix = it->get<std::uint32_t>();
  }
  core::TrackingId id(*kind, require_string(j, "id_account"), suffix);

  auto observed_at = core::parse_iso8601(require_string(j, "observed_at"));
  if (!observed_at) throw std::invalid_argument("bad observed_at timestamp");

  auto cls = core::parse_provenance_class(require_string(j, "provenance"));
  if (!cls) throw std::invalid_argument("unknown provenance");
  core::Provenance provenance{*cls, {}, {}};
  if (*cls == core::ProvenanceClass::Archive) provenance.snapshot_ts = require_string(j, "snapshot_ts");
  if (*cls == core::ProvenanceClass::ReverseLookup) provenance.provider = require_string(j, "provider");

  WaveObservation out{require_string(j, "wave"),
                      core::Observation{core::DomainKey(domain, host), std::move(id), *observed_at, provenance,
                                        require_string(j, "source_url"), require_string(j, "blob_hash")}};
  return out;
}

json seed_to_json(const core::SeedEntry& seed) {
  json j;
  j["domain"] = seed.domain.registrable;
  j["host"] = seed.domain.original_host;
  j["status"] = std::string(core::to_string(seed.status));
  j["category"] = seed.category ? json(*seed.category) : json(nullptr);
  return j;
}

core::SeedEntry seed_from_json(const json& j, const std::string& wave) {
  core::SeedEntry seed;
  const auto& domain = require_string(j, "domain");
  seed.domain = core::DomainKey(domain, j.value("host", domain));
  auto status = core::parse_seed_status(require_string(j, "status"));
  if (!status) throw std::invalid_argument("unknown seed status");
  seed.status = *status;
  if (j.contains("category") && j["category"].is_string()) seed.category = j["category"].get<std::string>();
  seed.wave = wave;
  return seed;
}

}  // namespace trackerlink::store
