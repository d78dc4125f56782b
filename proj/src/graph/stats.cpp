#include "trackerlink/graph/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace trackerlink::graph {

const char* to_string(SdConvention c) noexcept { return c == SdConvention::Sample ? "sample" : "population"; }

std::optional<SdConvention> parse_sd_convention(std::string_view s) noexcept {
  if (s == "sample") return SdConvention::Sample;
  if (s == "population") return SdConvention::Population;
  return std::nullopt;
}

NetworkStats dimension_stats(const std::vector<std::size_t>& dims, SdConvention conv) {
  NetworkStats st;
  st.convention = conv;
  st.n = dims.size();
  if (dims.empty()) return st;
  st.min = *std::min_element(dims.begin(), dims.end());
  st.max = *std::max_element(dims.begin(), dims.end());
  double sum = 0;
  for (auto d : dims) sum += static_cast<double>(d);
  st.mean = sum / static_cast<double>(st.n);
  double ss = 0;
  for (auto d : dims) ss += (static_cast<double>(d) - st.mean) * (static_cast<double>(d) - st.mean);
  if (conv == SdConvention::Population) {
    st.sd = std::sqrt(ss / static_cast<double>(st.n));
  } else if (st.n < 2) {
    st.sd = 0.0;
    st.sd_undefined = true;
  } else {
    st.sd = std::sqrt(ss / static_cast<double>(st.n - 1));
  }
  return st;
}

NetworkStats network_stats(const std::vector<Network>& networks, SdConvention conv) {
  std::vector<std::size_t> dims;
  dims.reserve(networks.size());
  for (const auto& n : networks) dims.push_back(n.dimension());
  return dimension_stats(dims, conv);
}

std::string format3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  return s == "-0.000" ? "0.000" : s;
}

std::string CoverageStats::percentage_text() const {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%lld.%02lld", percentage_hundredths / 100, percentage_hundredths % 100);
  return buf;
}

CoverageStats coverage_from_counts(std::size_t with, std::size_t active) {
  CoverageStats c;
  c.active_seeds = active;
  c.seeds_with_id = with;
  if (active == 0) return c;
  // round(10000 * with / active) half-up, in integers.
  const auto num = static_cast<long long>(with) * 20000 + static_cast<long long>(active);
  c.percentage_hundredths = num / (2 * static_cast<long long>(active));
  return c;
}

CoverageStats coverage_stats(const core::ScanWave& wave, const CoverageOptions& opts) {
  std::set<std::string> with_id;
  for (const auto& o : wave.observations) {
    if (o.provenance.cls == core::ProvenanceClass::Live ||
        (opts.include_archive && o.provenance.cls == core::ProvenanceClass::Archive))
      with_id.insert(o.domain.registrable);
  }
  std::size_t active = 0, with = 0;
  for (const auto& s : wave.seeds) {
    if (s.status != core::SeedStatus::Active) continue;
    ++active;
    if (with_id.count(s.domain.registrable)) ++with;
  }
  return coverage_from_counts(with, active);
}

std::size_t CategoryFrequency::count(const std::string& label) const {
  for (const auto& [l, n] : rows)
    if (l == label) return n;
  return 0;
}

CategoryFrequency category_frequency(const core::ScanWave& wave) {
  CategoryFrequency f;
  for (const auto& s : wave.seeds) {
    if (s.status != core::SeedStatus::Active) continue;
    const std::string label = s.category && !s.category->empty() ? *s.category : kUnlabeled;
    auto it = std::find_if(f.rows.begin(), f.rows.end(), [&](const auto& r) { return r.first == label; });
    if (it == f.rows.end())
      f.rows.emplace_back(label, 1);
    else
      ++it->second;
    ++f.total;
  }
  return f;
}

}  // namespace trackerlink::graph
