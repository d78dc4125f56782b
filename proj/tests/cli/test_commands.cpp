#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support/temp_dir.hpp"
#include "support/world.hpp"
#include "trackerlink/cli/commands.hpp"

using namespace trackerlink::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "trackerlink");
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct World {
  tl_test::TempDir dir{"tl-cli"};
  tl_world::Paths p = tl_world::write_world(dir.path, TL_FIXTURES);
  std::string c19 = p.config_2019.string();
  std::string c21 = p.config_2021.string();
};

}  // namespace

TEST_CASE("cli: 2019 pipeline reproduces the planted figures") {
  World w;
  auto scan = run({"scan", "-c", w.c19});
  CHECK(scan.code == kExitOk);
  CHECK(scan.out.find(std::string("accounting: ") + tl_world::kAccounting2019) != std::string::npos);
  CHECK(scan.out.find("active seeds with ids: 39/46") != std::string::npos);

  CHECK(run({"expand", "-c", w.c19}).code == kExitOk);
  auto link = run({"link", "-c", w.c19});
  CHECK(link.code == kExitOk);
  CHECK(link.out.find("11 networks") != std::string::npos);

  auto nets = nlohmann::json::parse(slurp(w.p.output / "2019" / "networks.json"));
  std::vector<std::size_t> dims;
  for (auto& n : nets["networks"]) dims.push_back(n["members"].size());
  CHECK(dims == tl_world::kDimensions2019);

  auto stats = run({"stats", "-c", w.c19});
  CHECK(stats.code == kExitOk);
  CHECK(stats.out.find("[ok] sd: reference 1.919 matches the population convention") != std::string::npos);
  CHECK(stats.out.find("[discrepancy] coverage: computed 84.78%") != std::string::npos);
  for (auto f : {"graph.gexf", "graph.graphml", "graph.dot", "graph.json", "graph.edges.csv", "stats.json",
                 "stats.csv", "seeds.csv", "relics.csv"})
    CHECK(fs::exists(w.p.output / "2019" / f));

  // a finished wave is not rescanned
  CHECK(run({"scan", "-c", w.c19}).code == kExitUsage);
}

TEST_CASE("cli: diff between the two waves") {
  World w;
  REQUIRE(run({"scan", "-c", w.c19}).code == kExitOk);
  auto s21 = run({"scan", "-c", w.c21});
  REQUIRE(s21.code == kExitOk);
  CHECK(s21.out.find(tl_world::kAccounting2021) != std::string::npos);
  auto d = run({"diff", "2019", "2021", "-c", w.c21});
  CHECK(d.code == kExitOk);
  auto j = nlohmann::json::parse(slurp(w.p.output / "diff_2019_2021.json"));
  CHECK(j["networks_new"].size() == tl_world::kNetworksNew);
  CHECK(j["networks_dissolved"].size() == tl_world::kNetworksDissolved);
  CHECK(j.dump().find(tl_world::kNewNetworkId) != std::string::npos);
  CHECK(j.dump().find(tl_world::kDissolvedNetworkId) != std::string::npos);
  CHECK(run({"diff", "2019", "2030", "-c", w.c21}).code == kExitUsage);
}

TEST_CASE("cli: archived captures link two sites, reruns add nothing") {
  World w;
  auto ch = w.p.config_history.string();
  REQUIRE(run({"scan", "-c", ch}).code == kExitOk);
  CHECK(run({"link", "-c", ch}).out.find(" 0 networks") != std::string::npos);
  auto h = run({"history", "-c", ch, "--from", "2019", "--to", "2019"});
  CHECK(h.code == kExitOk);
  auto link = run({"link", "-c", ch});
  CHECK(link.out.find(" 1 networks") != std::string::npos);
  auto nets = slurp(w.p.root / "out_history" / "history" / "networks.json");
  CHECK(nets.find(tl_world::kHistoryA) != std::string::npos);
  CHECK(nets.find(tl_world::kHistoryB) != std::string::npos);
  CHECK(nets.find(tl_world::kHistoryId) != std::string::npos);
  auto again = run({"history", "-c", ch, "--from", "2019", "--to", "2019"});
  CHECK(again.out.find(" 0 new observations") != std::string::npos);
}

TEST_CASE("cli: usage and config errors exit 2") {
  World w;
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"scan", "-c", (w.p.root / "missing.json").string()}).code == kExitUsage);
  CHECK(run({"link", "-c", w.c19, "--wave", "1999"}).code == kExitUsage);
  CHECK(run({"link", "-c", w.c19, "--format", "pdf"}).code == kExitUsage);
  CHECK(run({"history", "-c", w.c19, "--from", "2021", "--to", "2019"}).code == kExitUsage);

  tl_test::write_text(w.p.root / "empty.csv", "");
  CHECK(run({"scan", "-c", w.c19, "--seeds", (w.p.root / "empty.csv").string(), "--wave", "e"}).code == kExitUsage);

  auto cfg = nlohmann::json::parse(slurp(w.p.config_2019));
  cfg["lookup"]["access_token"] = "abc";
  tl_test::write_text(w.p.root / "leaky.json", cfg.dump());
  auto leaky = run({"scan", "-c", (w.p.root / "leaky.json").string()});
  CHECK(leaky.code == kExitUsage);
  CHECK(leaky.err.find("abc") == std::string::npos);
}

TEST_CASE("cli: spyonweb needs the token from the environment") {
  World w;
  REQUIRE(run({"scan", "-c", w.c19}).code == kExitOk);
  auto cfg = nlohmann::json::parse(slurp(w.p.config_2019));
  cfg["lookup"] = {{"provider", "spyonweb"}};
  tl_test::write_text(w.p.root / "spy.json", cfg.dump());
  ::unsetenv("SPYONWEB_ACCESS_TOKEN");
  CHECK(run({"expand", "-c", (w.p.root / "spy.json").string()}).code == kExitUsage);
}

TEST_CASE("cli: --offline refuses the network") {
  World w;
  auto cfg = nlohmann::json::parse(slurp(w.p.config_2019));
  cfg.erase("replay_dir");
  cfg["wave"] = "offline";
  tl_test::write_text(w.p.root / "live.json", cfg.dump());
  auto r = run({"scan", "-c", (w.p.root / "live.json").string(), "--offline"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("--offline") != std::string::npos);
}

TEST_CASE("cli: a wave without ids links to an empty graph") {
  World w;
  tl_test::write_text(w.p.root / "dead.csv", "domain,category,override_status\nnikde-neexistuje.sk,News-Focused,\n");
  auto scan = run({"scan", "-c", w.c19, "--seeds", (w.p.root / "dead.csv").string(), "--wave", "dead"});
  CHECK(scan.code != kExitUsage);
  CHECK(scan.out.find("1 = 0+1+0+0") != std::string::npos);
  auto link = run({"link", "-c", w.c19, "--wave", "dead"});
  CHECK(link.code == kExitOk);
  CHECK(link.out.find(" 0 networks") != std::string::npos);
  CHECK(run({"stats", "-c", w.c19, "--wave", "dead"}).code == kExitOk);
}
