#pragma once

#include <string>
#include <vector>

#include "trackerlink/cli/config.hpp"
#include "trackerlink/core/model.hpp"
#include "trackerlink/graph/diff.hpp"
#include "trackerlink/graph/graph.hpp"
#include "trackerlink/graph/stats.hpp"

namespace trackerlink::cli {

struct Accounting {
  std::size_t total = 0;
  std::size_t active = 0;
  std::size_t dead = 0;
  std::size_t non_target = 0;
  std::size_t platform = 0;

  // "144 = 46+21+74+3"
  std::string equation() const;
};

Accounting accounting(const std::vector<core::SeedEntry>& seeds);

struct ReferenceNote {
  std::string metric;
  double computed = 0.0;
  double reference = 0.0;
  bool matches = false;
  std::string text;
};

struct StatsReport {
  std::string wave;
  std::string generated_at;
  Accounting seeds;
  std::size_t networks = 0;
  std::size_t singleton_domains = 0;
  std::vector<std::size_t> dimensions;  // descending
  graph::NetworkStats sample;
  graph::NetworkStats population;
  graph::SdConvention primary = graph::SdConvention::Sample;
  graph::CoverageStats coverage;
  graph::CategoryFrequency categories;
  std::vector<ReferenceNote> notes;
};

StatsReport build_stats_report(const core::ScanWave& wave, const std::vector<graph::Network>& networks,
                               const graph::AttributionGraph& g, const StatsSettings& settings);

/// Compares computed figures with the configured references. Coverage is
/// compared at its printed precision (hundredths), the rest within tolerance.
std::vector<ReferenceNote> reference_notes(const StatsReport& r, const ReferenceFigures& ref);

std::string stats_text(const StatsReport& r);
std::string stats_json(const StatsReport& r);
std::string stats_csv(const StatsReport& r);

std::string networks_text(const std::string& wave, const std::vector<graph::Network>& networks);
std::string networks_json(const std::string& wave, const std::vector<graph::Network>& networks);
std::string networks_csv(const std::vector<graph::Network>& networks);

std::string diff_text(const graph::ChangeReport& r);
std::string diff_json(const graph::ChangeReport& r, const std::string& generated_at);
std::string diff_csv(const graph::ChangeReport& r);

/// Six decimals, fixed.
std::string format6(double v);

}  // namespace trackerlink::cli
