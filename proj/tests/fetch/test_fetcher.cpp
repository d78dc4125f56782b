#include "doctest.h"
#include "json.hpp"
#include "support/temp_dir.hpp"
#include "trackerlink/fetch/fetcher.hpp"
#include "trackerlink/store/sha256.hpp"
#include "trackerlink/store/store.hpp"

using namespace trackerlink;
using namespace trackerlink::fetch;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

struct World {
  tl_test::TempDir dir{"tl-replay"};
  json routes = {{"routes", json::array()}, {"dns_fail", json::array()}};

  World& page(const std::string& url, const std::string& body, int status = 200) {
    routes["routes"].push_back({{"url", url}, {"status", status}, {"body", body}});
    return *this;
  }
  World& redirect(const std::string& from, const std::string& to, int status = 301) {
    routes["routes"].push_back({{"url", from}, {"status", status}, {"headers", {{"Location", to}}}});
    return *this;
  }
  std::unique_ptr<ReplayClient> client() {
    tl_test::write_text(dir.path / "routes.json", routes.dump());
    return std::make_unique<ReplayClient>(dir.path);
  }
};

FetchConfig quick() {
  FetchConfig c;
  c.backoff_base = 0ms;
  return c;
}

}  // namespace

TEST_CASE("fetch_live follows http -> https://www redirects and keeps the domain key") {
  World w;
  w.redirect("http://panobcan.sk/", "https://panobcan.sk/")
      .redirect("https://panobcan.sk/", "https://www.panobcan.sk/", 302)
      .page("https://www.panobcan.sk/", "<html>UA-12857229-1</html>");
  auto client = w.client();
  PolitenessGate gate({0ms, 8});
  tl_test::TempDir sdir("tl-fstore");
  store::Store st(sdir.path);
  Fetcher f(*client, quick(), gate, &st);

  core::DomainKey key("panobcan.sk");
  auto r = f.fetch_live(key);
  REQUIRE(r);
  CHECK(r->status_code == 200);
  CHECK(r->final_url == "https://www.panobcan.sk/");
  CHECK(r->redirect_chain == std::vector<std::string>{"http://panobcan.sk/", "https://panobcan.sk/"});
  CHECK(r->body_hash == store::sha256_hex(r->body));
  CHECK(st.get_blob(r->body_hash) == r->body);
  CHECK(core::registrable_domain(r->final_url) == key);
}

TEST_CASE("failure reasons are distinct") {
  World w;
  w.routes["dns_fail"].push_back("dead.sk");
  w.routes["connect_fail"] = {"down.sk"};
  w.routes["tls_fail"] = {"badcert.sk"};
  w.page("http://gone.sk/", "", 410);
  auto client = w.client();
  PolitenessGate gate({0ms, 8});
  Fetcher f(*client, quick(), gate);

  CHECK(f.fetch_live(core::DomainKey("dead.sk")).error().reason == FailureReason::Dns);
  CHECK(f.fetch_live(core::DomainKey("nowhere.sk")).error().reason == FailureReason::Dns);
  CHECK(f.fetch_live(core::DomainKey("down.sk")).error().reason == FailureReason::Connect);
  CHECK(f.fetch_live(core::DomainKey("badcert.sk")).error().reason == FailureReason::Tls);
  auto gone = f.fetch_live(core::DomainKey("gone.sk"));
  CHECK(gone.error().reason == FailureReason::HttpStatus);
  CHECK(gone.error().status_code == 410);
  CHECK(f.fetch_url("not a url").error().reason == FailureReason::InvalidUrl);
}

TEST_CASE("retries: transient statuses are retried with exponential backoff") {
  World w;
  w.page("http://flaky.sk/", "<p>ok</p>");
  w.routes["sequence"] = {{"http://flaky.sk/", {503, 503, 200}}, {"http://broken.sk/", {500, 500, 500, 200}}};
  auto client = w.client();
  PolitenessGate gate({0ms, 8});
  FetchConfig cfg;
  cfg.backoff_base = 100ms;
  cfg.respect_robots = false;
  Fetcher f(*client, cfg, gate);
  std::vector<std::chrono::milliseconds> sleeps;
  f.set_sleeper([&](std::chrono::milliseconds d) { sleeps.push_back(d); });

  auto ok = f.fetch_url("http://flaky.sk/");
  REQUIRE(ok);
  CHECK(ok->body == "<p>ok</p>");
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{100ms, 200ms});

  sleeps.clear();
  auto bad = f.fetch_url("http://broken.sk/");
  REQUIRE_FALSE(bad);
  CHECK(bad.error().reason == FailureReason::HttpStatus);
  CHECK(bad.error().status_code == 500);
  CHECK(sleeps.size() == 2);

  // 404 is not retried.
  sleeps.clear();
  CHECK_FALSE(f.fetch_url("http://flaky.sk/missing"));
  CHECK(sleeps.empty());
}

TEST_CASE("redirect loops stop at the configured maximum") {
  World w;
  w.redirect("http://loop.sk/", "http://loop.sk/a").redirect("http://loop.sk/a", "http://loop.sk/");
  auto client = w.client();
  PolitenessGate gate({0ms, 8});
  auto cfg = quick();
  cfg.max_redirects = 10;
  Fetcher f(*client, cfg, gate);
  auto r = f.fetch_url("http://loop.sk/");
  REQUIRE_FALSE(r);
  CHECK(r.error().reason == FailureReason::TooManyRedirects);
  CHECK(r.error().redirect_chain.size() == 10);
}

TEST_CASE("robots.txt is honored unless disabled") {
  World w;
  w.page("http://private.sk/robots.txt", "User-agent: *\nDisallow: /\n").page("http://private.sk/", "<p>x</p>");
  auto client = w.client();
  PolitenessGate gate({0ms, 8});
  Fetcher polite(*client, quick(), gate);
  auto r = polite.fetch_live(core::DomainKey("private.sk"));
  REQUIRE_FALSE(r);
  CHECK(r.error().reason == FailureReason::RobotsDisallowed);
  CHECK_FALSE(r.error().hard());

  auto cfg = quick();
  cfg.respect_robots = false;
  Fetcher rude(*client, cfg, gate);
  CHECK(rude.fetch_live(core::DomainKey("private.sk")));

  // robots.txt fetched once per origin.
  polite.fetch_live(core::DomainKey("private.sk"));
  std::size_t robots_hits = 0;
  for (const auto& u : client->requests()) robots_hits += u == "http://private.sk/robots.txt";
  CHECK(robots_hits == 1);
}

TEST_CASE("offline client refuses everything") {
  OfflineClient offline;
  PolitenessGate gate({0ms, 8});
  Fetcher f(offline, quick(), gate);
  auto r = f.fetch_live(core::DomainKey("panobcan.sk"));
  REQUIRE_FALSE(r);
  CHECK(r.error().reason == FailureReason::Offline);
}

TEST_CASE("fetch_live_all returns results in input order") {
  World w;
  std::vector<core::DomainKey> domains;
  for (int i = 0; i < 40; ++i) {
    const std::string d = "site" + std::to_string(i) + ".sk";
    if (i % 7 != 3) w.page("http://" + d + "/", "<p>" + d + "</p>");
    domains.emplace_back(d);
  }
  auto client = w.client();
  PolitenessGate gate({0ms, 8});
  Fetcher f(*client, quick(), gate);
  auto results = f.fetch_live_all(domains, 8);
  REQUIRE(results.size() == domains.size());
  for (int i = 0; i < 40; ++i) {
    if (i % 7 == 3) {
      CHECK_FALSE(results[i]);
    } else {
      REQUIRE(results[i]);
      CHECK(results[i]->body == "<p>" + domains[i].registrable + "</p>");
    }
  }
}

TEST_CASE("user agent names the tool and the contact") {
  CHECK(default_user_agent("https://example.org/contact") ==
        "trackerlink/0.3.0 (website attribution research; +https://example.org/contact)");
  CHECK(default_user_agent("").find("trackerlink/") == 0);
}
