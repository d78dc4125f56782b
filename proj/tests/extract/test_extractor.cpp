#include <random>
#include <set>

#include "doctest.h"
#include "trackerlink/core/text.hpp"
#include "trackerlink/extract/extractor.hpp"

using namespace trackerlink;
using namespace trackerlink::extract;

TEST_CASE("extract_ids: analytics snippet") {
  const std::string body = "<script>ga('create', 'UA-12857229-1', 'auto');</script>";
  auto hits = extract_ids(body, "https://panobcan.sk/");
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].raw_token == "UA-12857229-1");
  CHECK(hits[0].byte_offset == body.find("UA-"));
  CHECK(hits[0].source_url == "https://panobcan.sk/");
  CHECK(hits[0].context_snippet.find("ga('create'") != std::string::npos);
}

TEST_CASE("extract_ids: adsense client") {
  const std::string body = R"(<script>(adsbygoogle = window.adsbygoogle || []).push({google_ad_client: "ca-pub-9657897336906985", enable_page_level_ads: true});</script>)";
  auto hits = extract_ids(body, "u");
  REQUIRE(hits.size() == 1);
  CHECK(hits[0].raw_token == "ca-pub-9657897336906985");
}

TEST_CASE("extract_ids: empty body") { CHECK(extract_ids("", "u").empty()); }

TEST_CASE("extract_ids: duplicates reported at distinct offsets, one observation downstream") {
  const std::string body = "x UA-1374898-1 y\n<!-- UA-1374898-1 -->";
  auto hits = extract_ids(body, "u");
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].byte_offset < hits[1].byte_offset);
  auto batch = hits_to_observations(hits, core::DomainKey("spevak.sk"), core::Provenance::live());
  CHECK(batch.observations.size() == 1);
}

TEST_CASE("extract_ids: decoys and word boundaries") {
  const std::string body =
      "qua-1234-5 epub-1234567890123456 UA-12345678-1z GUA-55555-1 "
      "UA-2019 tags pub_1234567890123456 ca-pubs-1234567890123456";
  CHECK(extract_ids(body, "u").empty());
}

TEST_CASE("extract_ids: placeholders are hits but never identities") {
  const std::string body = "ga('create', 'UA-XXXXXX-1'); google_ad_client = 'pub-123';";
  auto hits = extract_ids(body, "u");
  REQUIRE(hits.size() == 2);
  auto batch = hits_to_observations(hits, core::DomainKey("a.sk"), core::Provenance::live());
  CHECK(batch.observations.empty());
  CHECK(batch.rejected == 2);
  CHECK(batch.rejected_by_reason[core::RejectReason::Placeholder] == 1);
  CHECK(batch.rejected_by_reason[core::RejectReason::BadLength] == 1);
}

TEST_CASE("hits_to_observations: suffix variants and repeats") {
  core::DomainKey d("spevak.sk");
  std::vector<RawIdHit> hits = {{"UA-1374898-1", 0, "", "u"}, {"UA-1374898-1", 20, "", "u"}, {"UA-1374898-2", 40, "", "u"}};
  auto batch = hits_to_observations(hits, d, core::Provenance::live());
  REQUIRE(batch.observations.size() == 1);
  CHECK(batch.observations[0].id.kind() == core::IdKind::GaUa);
  CHECK(batch.observations[0].id.account() == "1374898");

  batch = hits_to_observations({{"UA-XXXXXX-1", 0, "", "u"}}, d, core::Provenance::live());
  CHECK(batch.observations.empty());
  CHECK(batch.rejected == 1);

  batch = hits_to_observations({{"UA-12857229-1", 0, "", "u"}, {"ca-pub-2531845767488846", 9, "", "u"}},
                               core::DomainKey("panobcan.sk"), core::Provenance::live());
  CHECK(batch.observations.size() == 2);
}

TEST_CASE("extract_ids: GA4/GTM only when enabled") {
  const std::string body = "gtag('config', 'G-ABCDEF1234'); (window,document,'script','dataLayer','GTM-5XK2Q7');";
  CHECK(extract_ids(body, "u").empty());
  ExtractorConfig cfg;
  cfg.normalize.enable_ga4 = cfg.normalize.enable_gtm = true;
  auto hits = extract_ids(body, "u", cfg);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].raw_token == "G-ABCDEF1234");
  CHECK(hits[1].raw_token == "GTM-5XK2Q7");
}

TEST_CASE("extract_ids: scan window bounds the body") {
  std::string body(100, ' ');
  body += "UA-1234567-1";
  ExtractorConfig cfg;
  cfg.scan_window = 50;
  CHECK(extract_ids(body, "u", cfg).empty());
  cfg.scan_window = 200;
  CHECK(extract_ids(body, "u", cfg).size() == 1);
}

TEST_CASE("extract_ids: context snippet is bounded valid UTF-8") {
  std::string filler;
  for (int i = 0; i < 200; ++i) filler += "\xC5\xA1\xE8";  // š plus a cp1250 byte
  const std::string body = filler + " UA-1234567-1 " + filler;
  auto hits = extract_ids(body, "u");
  REQUIRE(hits.size() == 1);
  const auto decoded = core::decode_utf8_lossy(hits[0].context_snippet);
  CHECK(decoded.size() <= kMaxContextChars);
  CHECK(core::lossy_utf8(hits[0].context_snippet) == hits[0].context_snippet);
  CHECK(hits[0].context_snippet.find("UA-1234567-1") != std::string::npos);
}

TEST_CASE("find_script_sources and same-domain filter") {
  const std::string body = R"(<html><head>
    <script src="/js/app.js?v=2&amp;x=1"></script>
    <SCRIPT type="text/javascript" SRC='https://cdn.example.sk/bundle.js'></SCRIPT>
    <script async src=//www.googletagmanager.com/gtag/js?id=UA-1></script>
    <script data-src="/ignored.js"></script>
    <script src="/js/app.js?v=2&amp;x=1"></script>
    <script>var a = 1;</script>
  </head></html>)";
  auto all = find_script_sources(body, "https://www.example.sk/clanok/1");
  REQUIRE(all.size() == 3);
  CHECK(all[0] == "https://www.example.sk/js/app.js?v=2&x=1");
  CHECK(all[1] == "https://cdn.example.sk/bundle.js");
  CHECK(all[2] == "https://www.googletagmanager.com/gtag/js?id=UA-1");

  ExtractorConfig cfg;
  auto same = same_domain_scripts(body, "https://www.example.sk/clanok/1", cfg);
  CHECK(same.size() == 2);
  cfg.script_cap = 1;
  CHECK(same_domain_scripts(body, "https://www.example.sk/", cfg).size() == 1);
  cfg.script_follow_depth = 0;
  CHECK(same_domain_scripts(body, "https://www.example.sk/", cfg).empty());
}

namespace {

std::string digits(std::mt19937& rng, int n, bool lead_nonzero) {
  std::uniform_int_distribution<int> d(0, 9);
  std::string s;
  for (int i = 0; i < n; ++i) {
    int v = d(rng);
    if (i == 0 && lead_nonzero && v == 0) v = 7;
    s += static_cast<char>('0' + v);
  }
  return s;
}

}  // namespace

TEST_CASE("property: planted ids are recovered exactly") {
  std::mt19937 rng(1234);
  const std::vector<std::string> templates = {
      // UTF-8 Slovak
      "<html><head><title>Spr\xC3\xA1vy z domova</title></head><body><p>Vl\xC3\xA1" "da schv\xC3\xA1lila "
      "nov\xC3\xBD z\xC3\xA1kon o dani.</p><p>qua-1234-5 epub-9999999999999999 UA-XXXXXX-1 pub-123</p></body></html>",
      // windows-1250 bytes (invalid as UTF-8)
      "<html><body><p>Spr\xE1vy \xE8itate\xBEov, \x9Akola a zdravie.</p><div>UA-2019 x</div></body></html>",
      // minified script blob
      "<script>!function(e,t){var n=e.createElement(t);n.async=1;}(document,'script');var cfg={a:1,b:[2,3]};</script>",
  };
  const std::vector<std::string> wrappers_ua = {"ga('create', '%', 'auto');", "gtag('config', \"%\");",
                                                "_gaq.push(['_setAccount', '%']);", "{\"trackingId\":\"%\"}"};
  const std::vector<std::string> wrappers_pub = {"google_ad_client = \"ca-%\";", "data-ad-client=\"ca-%\"",
                                                 "{\"publisher\":\"%\"}"};

  for (int trial = 0; trial < 300; ++trial) {
    std::string body = templates[trial % templates.size()];
    std::uniform_int_distribution<int> k_dist(0, 6);
    const int k = k_dist(rng);
    std::set<std::string> planted;
    for (int i = 0; i < k; ++i) {
      std::string snippet;
      if (rng() % 2) {
        auto id = "UA-" + digits(rng, 4 + static_cast<int>(rng() % 7), true) + "-" + std::to_string(1 + rng() % 30);
        planted.insert(core::normalize_id(id)->canonical());
        snippet = wrappers_ua[rng() % wrappers_ua.size()];
        snippet.replace(snippet.find('%'), 1, id);
      } else {
        auto id = "pub-" + digits(rng, 16, false);
        planted.insert(core::normalize_id(id)->canonical());
        snippet = wrappers_pub[rng() % wrappers_pub.size()];
        snippet.replace(snippet.find('%'), 1, id);
      }
      // Insert at a position adjacent to whitespace or a tag boundary.
      std::vector<std::size_t> slots;
      for (std::size_t p = 0; p < body.size(); ++p)
        if (body[p] == ' ' || body[p] == '>' || body[p] == ';') slots.push_back(p + 1);
      const std::size_t at = slots[rng() % slots.size()];
      body.insert(at, " " + snippet + " ");
    }
    auto hits = extract_ids(body, "u");
    for (std::size_t i = 1; i < hits.size(); ++i) CHECK(hits[i - 1].byte_offset < hits[i].byte_offset);
    auto batch = hits_to_observations(hits, core::DomainKey("x.sk"), core::Provenance::live());
    std::set<std::string> found;
    for (const auto& o : batch.observations) found.insert(o.id.canonical());
    CHECK(found == planted);
    // Pure function: same input, same output.
    auto again = extract_ids(body, "u");
    REQUIRE(again.size() == hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      CHECK(again[i].raw_token == hits[i].raw_token);
      CHECK(again[i].byte_offset == hits[i].byte_offset);
      CHECK(again[i].context_snippet == hits[i].context_snippet);
    }
  }
}
