#pragma once

// Planted two-wave world for end-to-end runs. Everything the CLI needs is
// written under one directory: seed lists, replayed HTTP (live sites and the
// archive), reverse-lookup fixtures and run configs. The planted truth is
// spelled out below so tests compare against constants, not against the
// generator's own bookkeeping.

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace tl_world {

struct Paths {
  std::filesystem::path root;
  std::filesystem::path config_2019;
  std::filesystem::path config_2021;
  std::filesystem::path config_history;
  std::filesystem::path store;
  std::filesystem::path output;
};

// 2019 wave
inline constexpr const char* kAccounting2019 = "144 = 46+21+74+3";
inline constexpr std::size_t kActive2019 = 46;
inline constexpr std::size_t kWithId2019 = 39;
inline const std::vector<std::size_t> kDimensions2019 = {9, 4, 4, 4, 4, 4, 3, 2, 2, 2, 2};

// 2021 wave
inline constexpr const char* kAccounting2021 = "205 = 65+51+87+2";
inline constexpr std::size_t kActive2021 = 65;
inline constexpr std::size_t kWithId2021 = 44;

// 2019 -> 2021 changes
inline constexpr std::size_t kAdsenseDeletions = 1;
inline constexpr std::size_t kGaDeletions = 1;
inline constexpr std::size_t kKindAdditions = 3;
inline constexpr std::size_t kNetworksNew = 1;
inline constexpr std::size_t kNetworksDissolved = 1;
inline constexpr const char* kNewNetworkId = "UA-24461628";
inline constexpr const char* kDissolvedNetworkId = "UA-1374898";

// History world: two sites linked only through archived 2019 captures.
inline constexpr const char* kHistoryA = "zdravy-rozum.sk";
inline constexpr const char* kHistoryB = "liecive-byliny.sk";
inline constexpr const char* kHistoryId = "UA-48213377";

/// `fixtures` is tests/fixtures (article texts are borrowed from lang/).
Paths write_world(const std::filesystem::path& root, const std::filesystem::path& fixtures);

}  // namespace tl_world
