#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "trackerlink/graph/stats.hpp"

using namespace trackerlink;
using namespace trackerlink::graph;

TEST_CASE("dimension_stats: [2,3,4]") {
  auto st = dimension_stats({2, 3, 4});
  CHECK(st.n == 3);
  CHECK(format3(st.mean) == "3.000");
  CHECK(format3(st.sd) == "1.000");
  CHECK_FALSE(st.sd_undefined);
}

TEST_CASE("dimension_stats: single network flags sample sd") {
  auto st = dimension_stats({5});
  CHECK(format3(st.mean) == "5.000");
  CHECK(st.sd == 0.0);
  CHECK(st.sd_undefined);
  auto pop = dimension_stats({5}, SdConvention::Population);
  CHECK_FALSE(pop.sd_undefined);
  CHECK(pop.sd == 0.0);
}

TEST_CASE("dimension_stats: empty list") {
  auto st = dimension_stats({});
  CHECK(st.n == 0);
  CHECK(st.mean == 0.0);
}

TEST_CASE("dimension_stats: planted table multisets") {
  // Closed forms: 2019 sum 40, sum of squares 186; 2021 sum 35, sum of squares 135.
  auto a = dimension_stats({9, 4, 4, 4, 4, 4, 3, 2, 2, 2, 2}, SdConvention::Population);
  CHECK(a.min == 2);
  CHECK(a.max == 9);
  CHECK(std::abs(a.mean - 40.0 / 11.0) < 1e-12);
  CHECK(std::abs(a.sd - std::sqrt(186.0 / 11.0 - (40.0 / 11.0) * (40.0 / 11.0))) < 1e-12);
  CHECK(format3(a.mean) == "3.636");
  CHECK(format3(a.sd) == "1.920");
  auto b = dimension_stats({9, 4, 4, 4, 4, 4, 3, 2, 2, 2, 2});
  CHECK(std::abs(b.sd - std::sqrt((186.0 - 1600.0 / 11.0) / 10.0)) < 1e-12);
}

TEST_CASE("property: sd conventions agree with a two-pass reference") {
  std::mt19937 rng(8);
  for (int t = 0; t < 500; ++t) {
    std::vector<std::size_t> d(2 + rng() % 40);
    for (auto& x : d) x = 2 + rng() % 20;
    const double n = static_cast<double>(d.size());
    double s = 0, s2 = 0;
    for (auto x : d) {
      s += static_cast<double>(x);
      s2 += static_cast<double>(x) * static_cast<double>(x);
    }
    const double var_pop = s2 / n - (s / n) * (s / n);
    CHECK(std::abs(dimension_stats(d, SdConvention::Population).sd - std::sqrt(std::max(0.0, var_pop))) < 1e-9);
    CHECK(std::abs(dimension_stats(d).sd - std::sqrt(std::max(0.0, var_pop * n / (n - 1)))) < 1e-9);
  }
}

TEST_CASE("coverage: exact half-up rounding") {
  CHECK(coverage_from_counts(44, 65).percentage_text() == "67.69");
  CHECK(coverage_from_counts(39, 46).percentage_text() == "84.78");
  CHECK(coverage_from_counts(0, 10).percentage_text() == "0.00");
  CHECK(coverage_from_counts(10, 10).percentage_text() == "100.00");
  CHECK(coverage_from_counts(1, 8).percentage_text() == "12.50");
  CHECK(coverage_from_counts(1, 16).percentage_text() == "6.25");
  // 1/32 = 3.125 exactly: half rounds up.
  CHECK(coverage_from_counts(1, 32).percentage_text() == "3.13");
  CHECK(coverage_from_counts(0, 0).percentage_text() == "0.00");
}

TEST_CASE("property: coverage rounding matches a long-division reference") {
  for (std::size_t active = 1; active <= 300; ++active)
    for (std::size_t with = 0; with <= active; ++with) {
      // Truncate 100*with/active to three decimals; a third digit >= 5 means
      // the remainder is at least half a hundredth.
      const long long thousandths = static_cast<long long>(with) * 100000 / static_cast<long long>(active);
      const long long hundredths = thousandths / 10 + (thousandths % 10 >= 5 ? 1 : 0);
      CHECK(coverage_from_counts(with, active).percentage_hundredths == hundredths);
    }
}

TEST_CASE("coverage_stats counts active seeds with live ids") {
  core::ScanWave w;
  w.name = "w";
  w.seeds = {{core::DomainKey("a.sk"), core::SeedStatus::Active, {}, "w"},
             {core::DomainKey("b.sk"), core::SeedStatus::Active, {}, "w"},
             {core::DomainKey("c.sk"), core::SeedStatus::Dead, {}, "w"},
             {core::DomainKey("d.sk"), core::SeedStatus::Active, {}, "w"}};
  auto id = *core::normalize_id("UA-1234567-1");
  w.observations = {{core::DomainKey("a.sk"), id, {}, core::Provenance::live(), "", ""},
                    {core::DomainKey("c.sk"), id, {}, core::Provenance::live(), "", ""},
                    {core::DomainKey("b.sk"), id, {}, core::Provenance::archive("20190101000000"), "", ""},
                    {core::DomainKey("d.sk"), id, {}, core::Provenance::reverse_lookup("x"), "", ""}};
  auto c = coverage_stats(w);
  CHECK(c.active_seeds == 3);
  CHECK(c.seeds_with_id == 1);
  CHECK(coverage_stats(w, {.include_archive = true}).seeds_with_id == 2);
}

TEST_CASE("category_frequency") {
  core::ScanWave w;
  CHECK(category_frequency(w).rows.empty());
  w.seeds = {{core::DomainKey("a.sk"), core::SeedStatus::Active, "News-Focused", ""},
             {core::DomainKey("b.sk"), core::SeedStatus::Active, "Paranormal", ""},
             {core::DomainKey("c.sk"), core::SeedStatus::Active, "News-Focused", ""},
             {core::DomainKey("d.sk"), core::SeedStatus::Dead, "Paranormal", ""},
             {core::DomainKey("e.sk"), core::SeedStatus::Active, std::nullopt, ""}};
  auto f = category_frequency(w);
  CHECK(f.total == 4);
  CHECK(f.count("News-Focused") == 2);
  CHECK(f.count("Paranormal") == 1);
  CHECK(f.count(kUnlabeled) == 1);
  CHECK(f.rows[0].first == "News-Focused");
}
