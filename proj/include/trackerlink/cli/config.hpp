#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "trackerlink/archive/archive.hpp"
#include "trackerlink/extract/extractor.hpp"
#include "trackerlink/fetch/fetcher.hpp"
#include "trackerlink/fetch/politeness.hpp"
#include "trackerlink/fetch/seeds.hpp"
#include "trackerlink/graph/stats.hpp"
#include "trackerlink/lookup/lookup.hpp"

namespace trackerlink::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProviderKind { None, Fixture, SpyOnWeb };

struct LookupSettings {
  ProviderKind provider = ProviderKind::None;
  std::filesystem::path fixture_dir;
  std::string endpoint = lookup::kSpyOnWebEndpoint;
  int expand_depth = 1;
  lookup::ServiceConfig service;
  std::optional<lookup::Date> reference_date;  // staleness reference; today when unset
  lookup::RelicPolicy relic;
};

// Published figures to compare against. Mismatches become report notes.
struct ReferenceFigures {
  std::optional<double> networks;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> mean;
  std::optional<double> sd;
  std::optional<double> coverage_percent;
  double tolerance = 0.001;

  bool any() const { return networks || min || max || mean || sd || coverage_percent; }
};

struct StatsSettings {
  graph::SdConvention sd_convention = graph::SdConvention::Sample;
  ReferenceFigures reference;
};

struct RunConfig {
  std::filesystem::path seed_file;
  std::string wave;
  std::filesystem::path store = "trackerlink-store";
  std::filesystem::path output = "trackerlink-out";
  std::filesystem::path replay_dir;

  std::string user_agent_contact;
  fetch::FetchConfig fetch;
  fetch::PolitenessPolicy politeness;
  std::size_t workers = 8;

  fetch::ClassifyConfig classify;
  extract::ExtractorConfig extract;

  archive::ArchiveConfig archive;
  std::string history_from;
  std::string history_to;

  LookupSettings lookup;
  StatsSettings stats;
};

/// Strict: unknown keys and credential-looking keys throw ConfigError.
/// Relative paths resolve against `base_dir`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const RunConfig& c);
/// sha256 of the canonical dump, without paths and wave name.
std::string config_hash(const RunConfig& c);

std::string_view to_string(ProviderKind k);

}  // namespace trackerlink::cli
