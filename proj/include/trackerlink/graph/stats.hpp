#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "trackerlink/core/model.hpp"
#include "trackerlink/graph/graph.hpp"

namespace trackerlink::graph {

enum class SdConvention { Sample, Population };

const char* to_string(SdConvention c) noexcept;
std::optional<SdConvention> parse_sd_convention(std::string_view s) noexcept;

struct NetworkStats {
  std::size_t n = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
  double sd = 0.0;
  SdConvention convention = SdConvention::Sample;
  // Sample sd of a single network is undefined; sd is then reported as 0.
  bool sd_undefined = false;
};

NetworkStats network_stats(const std::vector<Network>& networks, SdConvention conv = SdConvention::Sample);
NetworkStats dimension_stats(const std::vector<std::size_t>& dimensions, SdConvention conv = SdConvention::Sample);

/// Fixed three-decimal presentation used in reports.
std::string format3(double v);

struct CoverageStats {
  std::size_t active_seeds = 0;
  std::size_t seeds_with_id = 0;
  // Hundredths of a percent, rounded half-up from the exact ratio.
  long long percentage_hundredths = 0;

  double percentage() const noexcept { return static_cast<double>(percentage_hundredths) / 100.0; }
  std::string percentage_text() const;  // "67.69"
};

struct CoverageOptions {
  // Archive observations on a seed are historical; by default only what the
  // live fetch found counts as "contains an id".
  bool include_archive = false;
};

CoverageStats coverage_from_counts(std::size_t seeds_with_id, std::size_t active_seeds);
CoverageStats coverage_stats(const core::ScanWave& wave, const CoverageOptions& opts = {});

inline constexpr const char* kUnlabeled = "Unlabeled";

struct CategoryFrequency {
  std::vector<std::pair<std::string, std::size_t>> rows;  // first-appearance order
  std::size_t total = 0;

  std::size_t count(const std::string& label) const;
};

CategoryFrequency category_frequency(const core::ScanWave& wave);

}  // namespace trackerlink::graph
