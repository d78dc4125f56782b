#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "doctest.h"
#include "trackerlink/extract/extractor.hpp"

using namespace trackerlink;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("hand-annotated corpus: extracted identities equal annotations") {
  const std::filesystem::path dir = std::filesystem::path(TL_FIXTURES) / "extraction";
  auto ann = nlohmann::json::parse(slurp(dir / "annotations.json"));
  REQUIRE(ann.size() == 20);
  std::size_t fp = 0, fn = 0;
  for (auto& [file, ids] : ann.items()) {
    CAPTURE(file);
    const std::string body = slurp(dir / "pages" / file);
    REQUIRE(!body.empty());
    auto hits = extract::extract_ids(body, "https://example.sk/");
    auto batch = extract::hits_to_observations(hits, core::DomainKey("example.sk"), core::Provenance::live());
    std::set<std::string> got, want;
    for (auto& o : batch.observations) got.insert(o.id.canonical());
    for (auto& v : ids) want.insert(v.get<std::string>());
    for (auto& g : got) fp += !want.count(g);
    for (auto& w : want) fn += !got.count(w);
    CHECK(got == want);
  }
  CHECK(fp == 0);
  CHECK(fn == 0);
}
