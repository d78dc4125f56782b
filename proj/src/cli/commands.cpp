#include "trackerlink/cli/commands.hpp"

#include <atomic>
#include <iostream>
#include <map>
#include <sstream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "trackerlink/archive/archive.hpp"
#include "trackerlink/cli/config.hpp"
#include "trackerlink/cli/export.hpp"
#include "trackerlink/cli/report.hpp"
#include "trackerlink/core/domain.hpp"
#include "trackerlink/core/time.hpp"
#include "trackerlink/extract/extractor.hpp"
#include "trackerlink/fetch/fetcher.hpp"
#include "trackerlink/fetch/seeds.hpp"
#include "trackerlink/graph/diff.hpp"
#include "trackerlink/graph/graph.hpp"
#include "trackerlink/lookup/lookup.hpp"
#include "trackerlink/store/store.hpp"

namespace trackerlink::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "0.3.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config_path;
  std::string store;
  std::string output;
  std::string wave;
  std::string seeds;
  std::string replay;
  std::string export_timestamp;
  bool offline = false;
  bool no_robots = false;
  bool skip_corrupt = false;
  int verbose = 0;
};

// Wraps the real client so network use under --offline can be reported as
// a usage error instead of a pile of per-domain failures.
class GuardedClient final : public fetch::HttpClient {
 public:
  explicit GuardedClient(std::unique_ptr<fetch::HttpClient> inner) : inner_(std::move(inner)) {}
  fetch::HttpOutcome get(const core::Url& url, const fetch::RequestOptions& opts) override {
    auto r = inner_->get(url, opts);
    if (!r && r.error().reason == fetch::FailureReason::Offline) ++refused_;
    return r;
  }
  std::size_t refused() const { return refused_.load(); }

 private:
  std::unique_ptr<fetch::HttpClient> inner_;
  std::atomic<std::size_t> refused_{0};
};

struct Context {
  Globals g;
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
  std::unique_ptr<GuardedClient> http;

  GuardedClient& client() {
    if (!http) {
      std::unique_ptr<fetch::HttpClient> inner;
      if (!cfg.replay_dir.empty())
        inner = std::make_unique<fetch::ReplayClient>(cfg.replay_dir);
      else if (g.offline)
        inner = std::make_unique<fetch::OfflineClient>();
      else
        inner = fetch::make_live_client();
      http = std::make_unique<GuardedClient>(std::move(inner));
    }
    return *http;
  }

  // Exit code after a network-using command.
  int network_verdict(int code) {
    if (http && http->refused()) {
      err << "error: " << http->refused() << " network request(s) attempted under --offline\n";
      return kExitUsage;
    }
    return code;
  }

  std::string timestamp() const {
    return g.export_timestamp.empty() ? core::format_iso8601(core::now_utc()) : g.export_timestamp;
  }

  fs::path wave_dir(const std::string& wave) const { return cfg.output / wave; }

  const std::string& wave_name() const {
    if (cfg.wave.empty()) throw UsageError("no wave given (use --wave or the config key 'wave')");
    return cfg.wave;
  }

  store::LoadOptions load_options() const { return {g.skip_corrupt}; }

  core::ScanWave load_wave(store::Store& st, const std::string& name) {
    store::LoadReport report;
    auto w = st.load_wave(name, load_options(), &report);
    if (!report.skipped_lines.empty())
      err << "warning: skipped " << report.skipped_lines.size() << " corrupt log line(s)\n";
    return w;
  }
};

void write_meta(store::Store& st, const RunConfig& cfg) {
  st.write_meta({kToolVersion, config_hash(cfg), core::PublicSuffixList::builtin().version()});
}

std::vector<core::Observation> extract_live(fetch::Fetcher& fetcher, const fetch::FetchResult& page,
                                            const core::DomainKey& domain, const RunConfig& cfg) {
  const auto live = core::Provenance::live();
  auto hits = extract::extract_ids(page.body, page.final_url, cfg.extract);
  auto obs = extract::hits_to_observations(hits, domain, live, cfg.extract, page.fetched_at, page.body_hash).observations;
  for (const auto& url : extract::same_domain_scripts(page.body, page.final_url, cfg.extract)) {
    auto script = fetcher.fetch_url(url);
    if (!script) {
      spdlog::debug("script {} not fetched: {}", url, fetch::to_string(script.error().reason));
      continue;
    }
    auto shits = extract::extract_ids(script->body, script->final_url, cfg.extract);
    auto sobs = extract::hits_to_observations(shits, domain, live, cfg.extract, script->fetched_at, script->body_hash);
    obs.insert(obs.end(), sobs.observations.begin(), sobs.observations.end());
  }
  return core::deduplicate(obs);
}

std::size_t append_all(store::Store& st, const std::string& wave, const std::vector<core::Observation>& obs) {
  std::size_t fresh = 0;
  for (const auto& o : obs)
    if (st.append_observation(wave, o)) ++fresh;
  st.flush();
  return fresh;
}

// ---- scan -----------------------------------------------------------------

int cmd_scan(Context& ctx) {
  auto& cfg = ctx.cfg;
  const auto& wave = ctx.wave_name();
  if (cfg.seed_file.empty()) throw UsageError("no seed file given (use --seeds or the config key 'seed_file')");
  auto rows = fetch::load_seed_file(cfg.seed_file);
  if (rows.empty()) throw UsageError("seed file " + cfg.seed_file.string() + " has no entries");

  store::Store st(cfg.store);
  store::WaveManifest manifest;
  if (st.has_wave(wave)) {
    manifest = st.load_manifest(wave);
    if (manifest.finished_at) throw UsageError("wave '" + wave + "' is already finished; scan into a new wave");
  } else {
    manifest.name = wave;
    manifest.started_at = core::now_utc();
  }
  manifest.config_hash = config_hash(cfg);
  write_meta(st, cfg);

  fetch::PolitenessGate gate(cfg.politeness);
  fetch::Fetcher fetcher(ctx.client(), cfg.fetch, gate, &st);

  // Overrides and platform hosts are settled without touching the network.
  std::vector<std::size_t> fetch_idx;
  std::vector<core::DomainKey> fetch_domains;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].override_status || fetch::on_platform_blocklist(rows[i].domain, cfg.classify.platform_blocklist))
      continue;
    fetch_idx.push_back(i);
    fetch_domains.push_back(rows[i].domain);
  }
  spdlog::info("scan {}: {} seeds, fetching {}", wave, rows.size(), fetch_domains.size());
  auto outcomes = fetcher.fetch_live_all(fetch_domains, cfg.workers);
  std::vector<const fetch::FetchOutcome*> outcome_of(rows.size(), nullptr);
  for (std::size_t k = 0; k < fetch_idx.size(); ++k) outcome_of[fetch_idx[k]] = &outcomes[k];

  std::vector<fetch::Classification> classes(rows.size());
  std::size_t soft_failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    classes[i] = fetch::classify_seed(rows[i], outcome_of[i], cfg.classify);
    const auto* o = outcome_of[i];
    if (o && !*o && !o->error().hard()) {
      ++soft_failures;
      ctx.err << "warning: " << rows[i].domain.registrable << " not fetched: " << fetch::to_string(o->error().reason)
              << "\n";
    }
  }

  std::vector<std::vector<core::Observation>> found(rows.size());
  fetch::parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
    const auto* o = outcome_of[i];
    if (classes[i].status != core::SeedStatus::Active || !o || !*o) return;
    found[i] = extract_live(fetcher, **o, rows[i].domain, cfg);
  });

  std::size_t observed = 0;
  std::size_t with_id = 0;
  std::vector<core::SeedEntry> seeds;
  std::ostringstream seed_csv;
  seed_csv << "domain,category,status,reason,language,language_confidence,ids\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    seeds.push_back({rows[i].domain, classes[i].status, rows[i].category, wave});
    observed += append_all(st, wave, found[i]);
    if (!found[i].empty()) ++with_id;
    if (const auto* o = outcome_of[i]; o && *o) manifest.blobs.push_back((*o)->body_hash);
    std::string ids;
    for (const auto& ob : found[i]) ids += (ids.empty() ? "" : ";") + ob.id.canonical();
    char conf[16];
    std::snprintf(conf, sizeof conf, "%.3f", classes[i].language_confidence);
    seed_csv << csv_field(rows[i].domain.registrable) << ',' << csv_field(rows[i].category.value_or("")) << ','
             << to_string(classes[i].status) << ',' << csv_field(classes[i].reason) << ','
             << classes[i].detected_language << ',' << (classes[i].detected_language.empty() ? "" : conf) << ','
             << csv_field(ids) << '\n';
  }
  manifest.seeds = seeds;
  manifest.finished_at = core::now_utc();
  st.save_manifest(manifest);
  write_output(ctx.wave_dir(wave) / "seeds.csv", seed_csv.str());

  const auto acc = accounting(seeds);
  ctx.out << "accounting: " << acc.equation() << " (active+dead+non-target+platform)\n";
  ctx.out << "active seeds with ids: " << with_id << "/" << acc.active << ", observations logged: " << observed << "\n";
  if (!cfg.fetch.respect_robots) ctx.out << "robots.txt was not consulted (--no-robots)\n";
  return ctx.network_verdict(soft_failures ? kExitPartial : kExitOk);
}

// ---- history --------------------------------------------------------------

bool is_ts_prefix(const std::string& s) {
  return (s.size() >= 4 && s.size() <= 14 && s.size() % 2 == 0) &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

int cmd_history(Context& ctx, std::string from, std::string to, bool include_expanded) {
  auto& cfg = ctx.cfg;
  if (from.empty()) from = cfg.history_from;
  if (to.empty()) to = cfg.history_to;
  if (!from.empty() && !is_ts_prefix(from)) throw UsageError("--from must look like 2019, 201904 or 20190401");
  if (!to.empty() && !is_ts_prefix(to)) throw UsageError("--to must look like 2021, 202105 or 20210531");
  if (!from.empty() && !to.empty()) {
    std::string lo = from, hi = to;
    lo.resize(14, '0');
    hi.resize(14, '9');
    if (lo > hi) throw UsageError("--from " + from + " is after --to " + to);
  }
  const auto& wave = ctx.wave_name();
  store::Store st(cfg.store);
  auto w = ctx.load_wave(st, wave);

  std::set<core::DomainKey> domains;
  for (const auto& d : w.active_seeds()) domains.insert(d);
  if (include_expanded)
    for (const auto& o : w.observations)
      if (o.provenance.cls == core::ProvenanceClass::ReverseLookup) domains.insert(o.domain);
  std::vector<core::DomainKey> list(domains.begin(), domains.end());

  auto acfg = cfg.archive;
  acfg.user_agent = cfg.fetch.user_agent;
  fetch::PolitenessGate gate(cfg.politeness);
  archive::ArchiveClient client(ctx.client(), gate, acfg, &st);

  std::vector<archive::HistoryScan> scans(list.size());
  fetch::parallel_for(list.size(), archive::kArchiveConcurrency, [&](std::size_t i) {
    scans[i] = archive::scan_history(client, list[i], from, to, cfg.extract);
  });

  std::size_t fetched = 0, skipped = 0, logged = 0, failures = 0;
  for (const auto& s : scans) {
    fetched += s.fetched();
    skipped += s.skipped();
    logged += append_all(st, wave, s.observations());
    if (s.error) {
      ++failures;
      ctx.err << "warning: archive listing failed for " << s.domain.registrable << ": " << s.error->detail << "\n";
    }
  }
  auto manifest = st.load_manifest(wave);
  manifest.augmentations.push_back({"history",
                                    "from=" + (from.empty() ? std::string("*") : from) +
                                        " to=" + (to.empty() ? std::string("*") : to) + " domains=" +
                                        std::to_string(list.size()) + " observations=" + std::to_string(logged),
                                    core::now_utc()});
  st.save_manifest(manifest);

  ctx.out << "history: " << list.size() << " domains, " << fetched << " snapshots fetched, " << skipped
          << " skipped, " << logged << " new observations";
  if (failures) ctx.out << ", " << failures << " listing failures";
  ctx.out << "\n";
  return ctx.network_verdict(failures ? kExitPartial : kExitOk);
}

// ---- expand ---------------------------------------------------------------

int cmd_expand(Context& ctx, int depth_flag) {
  auto& cfg = ctx.cfg;
  const auto& wave = ctx.wave_name();
  store::Store st(cfg.store);
  auto w = ctx.load_wave(st, wave);

  std::unique_ptr<lookup::Provider> provider;
  switch (cfg.lookup.provider) {
    case ProviderKind::None:
      throw UsageError("no lookup provider configured (lookup.provider is none)");
    case ProviderKind::Fixture:
      provider = std::make_unique<lookup::FixtureProvider>(cfg.lookup.fixture_dir);
      break;
    case ProviderKind::SpyOnWeb:
      provider = lookup::SpyOnWebProvider::from_environment(ctx.client(), cfg.lookup.endpoint, cfg.fetch.user_agent);
      if (!provider)
        throw UsageError(std::string("lookup provider spyonweb needs the ") + lookup::kSpyOnWebTokenEnv +
                         " environment variable");
      break;
  }
  write_meta(st, cfg);
  lookup::LookupService service(*provider, &st, cfg.lookup.service);

  fetch::PolitenessGate gate(cfg.politeness);
  fetch::Fetcher fetcher(ctx.client(), cfg.fetch, gate, &st);

  lookup::ExpandConfig ec;
  ec.depth = depth_flag > 0 ? depth_flag : cfg.lookup.expand_depth;
  if (ec.depth < 1 || ec.depth > lookup::kMaxExpandDepth) throw UsageError("--depth must be 1 or 2");
  ec.relic = cfg.lookup.relic;
  ec.run_date = cfg.lookup.reference_date.value_or(
      lookup::Date{std::chrono::floor<std::chrono::days>(core::now_utc())});
  ec.is_live = [&](const core::DomainKey& d) { return fetcher.fetch_live(d).has_value(); };
  ec.scan_domain = [&](const core::DomainKey& d) -> std::vector<core::Observation> {
    auto page = fetcher.fetch_live(d);
    if (!page) return {};
    return extract_live(fetcher, *page, d, cfg);
  };
  auto res = lookup::expand(w, service, ec);
  const auto logged = append_all(st, wave, res.observations);

  std::ostringstream relics;
  relics << "domain,reason,detail\n";
  std::map<std::string, std::size_t> by_reason;
  for (const auto& r : res.removals) {
    ++by_reason[std::string(lookup::to_string(r.reason))];
    relics << csv_field(r.domain.registrable) << ',' << lookup::to_string(r.reason) << ',' << csv_field(r.detail)
           << '\n';
  }
  write_output(ctx.wave_dir(wave) / "relics.csv", relics.str());

  auto manifest = st.load_manifest(wave);
  manifest.augmentations.push_back({"expand",
                                    "provider=" + provider->name() + " depth=" + std::to_string(ec.depth) +
                                        " discovered=" + std::to_string(res.discovered.size()),
                                    core::now_utc()});
  st.save_manifest(manifest);

  ctx.out << "expand: " << res.records.size() << " lookups (" << service.cache_hits() << " from cache), "
          << res.discovered.size() << " domains discovered, " << logged << " new observations\n";
  ctx.out << "relics removed: " << res.removals.size();
  for (const auto& [reason, n] : by_reason) ctx.out << " " << reason << "=" << n;
  ctx.out << "\n";
  for (const auto& gap : res.gaps)
    ctx.err << "warning: lookup gap " << gap.id.canonical() << " (" << lookup::to_string(gap.kind)
            << "): " << gap.detail << "\n";
  if (res.auth_failed) ctx.err << "warning: provider rejected the credentials; expansion stopped\n";
  return ctx.network_verdict(res.gaps.empty() && !res.auth_failed ? kExitOk : kExitPartial);
}

// ---- link / stats / diff ---------------------------------------------------

int cmd_link(Context& ctx, const std::vector<std::string>& formats) {
  const auto& wave = ctx.wave_name();
  store::Store st(ctx.cfg.store);
  auto w = ctx.load_wave(st, wave);
  auto g = graph::build_graph(w);
  auto nets = graph::project_networks(g);

  std::vector<GraphFormat> chosen;
  if (formats.empty()) chosen = all_graph_formats();
  for (const auto& f : formats) {
    auto it = std::find_if(all_graph_formats().begin(), all_graph_formats().end(),
                           [&](GraphFormat x) { return to_string(x) == f; });
    if (it == all_graph_formats().end()) throw UsageError("unknown graph format '" + f + "'");
    chosen.push_back(*it);
  }
  ExportOptions opts;
  opts.timestamp = ctx.timestamp();
  opts.creator = std::string("trackerlink ") + kToolVersion;
  const auto dir = ctx.wave_dir(wave);
  for (auto f : chosen) write_output(dir / ("graph" + std::string(file_extension(f))), export_graph(g, nets, f, opts));
  write_output(dir / "networks.txt", networks_text(wave, nets));
  write_output(dir / "networks.json", networks_json(wave, nets));
  write_output(dir / "networks.csv", networks_csv(nets));

  ctx.out << "link: " << g.domains.size() << " domains, " << g.ids.size() << " ids, " << g.edges.size()
          << " edges, " << nets.size() << " networks -> " << dir.string() << "\n";
  return kExitOk;
}

int cmd_stats(Context& ctx) {
  const auto& wave = ctx.wave_name();
  store::Store st(ctx.cfg.store);
  auto w = ctx.load_wave(st, wave);
  auto g = graph::build_graph(w);
  auto nets = graph::project_networks(g);
  auto report = build_stats_report(w, nets, g, ctx.cfg.stats);
  report.generated_at = ctx.timestamp();
  const auto dir = ctx.wave_dir(wave);
  write_output(dir / "stats.txt", stats_text(report));
  write_output(dir / "stats.json", stats_json(report));
  write_output(dir / "stats.csv", stats_csv(report));
  ctx.out << stats_text(report);
  return kExitOk;
}

int cmd_diff(Context& ctx, const std::string& w1, const std::string& w2) {
  store::Store st(ctx.cfg.store);
  auto a = ctx.load_wave(st, w1);
  auto b = ctx.load_wave(st, w2);
  auto report = graph::diff_waves(a, b);
  const auto base = ctx.cfg.output / ("diff_" + w1 + "_" + w2);
  write_output(fs::path(base.string() + ".txt"), diff_text(report));
  write_output(fs::path(base.string() + ".json"), diff_json(report, ctx.timestamp()));
  write_output(fs::path(base.string() + ".csv"), diff_csv(report));
  ctx.out << diff_text(report);
  return kExitOk;
}

void setup_logging(int verbose) {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_logger_mt("trackerlink");
    l->set_pattern("[%l] %v");
    return l;
  }();
  spdlog::set_default_logger(logger);
  spdlog::set_level(verbose >= 2 ? spdlog::level::debug : verbose == 1 ? spdlog::level::info : spdlog::level::warn);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"trackerlink: map website networks through shared analytics and advertising ids"};
  app.name("trackerlink");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config,-c", g.config_path, "run configuration (JSON)");
  app.add_option("--store", g.store, "store directory (overrides config)");
  app.add_option("--output,-o", g.output, "report directory (overrides config)");
  app.add_option("--wave,-w", g.wave, "wave name (overrides config)");
  app.add_option("--seeds", g.seeds, "seed CSV (overrides config)");
  app.add_option("--replay", g.replay, "serve HTTP from a recorded fixture directory");
  app.add_option("--export-timestamp", g.export_timestamp, "timestamp written into exports, for reproducible output");
  app.add_flag("--offline", g.offline, "make any network access a hard error");
  app.add_flag("--no-robots", g.no_robots, "do not consult robots.txt");
  app.add_flag("--skip-corrupt", g.skip_corrupt, "skip unparsable observation log lines");
  app.add_flag("-v,--verbose", g.verbose, "more logging (repeat for debug)");

  auto* scan = app.add_subcommand("scan", "classify seeds, fetch live pages and extract ids");
  std::string from, to;
  bool expanded = false;
  auto* history = app.add_subcommand("history", "add ids from archived snapshots of active seeds");
  history->add_option("--from", from, "earliest snapshot (YYYY[MM[DD...]])");
  history->add_option("--to", to, "latest snapshot (YYYY[MM[DD...]])");
  history->add_flag("--expanded", expanded, "also cover domains found by reverse lookup");
  int depth = 0;
  auto* expand = app.add_subcommand("expand", "reverse-look-up seed ids to find more domains");
  expand->add_option("--depth", depth, "1 or 2");
  std::vector<std::string> formats;
  auto* link = app.add_subcommand("link", "build the graph, project networks and export them");
  link->add_option("--format", formats, "gexf, graphml, dot, json, csv (default: all)");
  auto* stats = app.add_subcommand("stats", "network statistics, coverage and categories");
  std::string w1, w2;
  auto* diff = app.add_subcommand("diff", "compare two waves");
  diff->add_option("from_wave", w1)->required();
  diff->add_option("to_wave", w2)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  setup_logging(g.verbose);

  Context ctx{g, {}, out, err, nullptr};
  try {
    if (!g.config_path.empty()) ctx.cfg = load_config(g.config_path);
    if (!g.store.empty()) ctx.cfg.store = g.store;
    if (!g.output.empty()) ctx.cfg.output = g.output;
    if (!g.wave.empty()) ctx.cfg.wave = g.wave;
    if (!g.seeds.empty()) ctx.cfg.seed_file = g.seeds;
    if (!g.replay.empty()) ctx.cfg.replay_dir = g.replay;
    if (g.no_robots) {
      ctx.cfg.fetch.respect_robots = false;
      spdlog::warn("robots.txt checks disabled by --no-robots");
    }
    if (scan->parsed()) return cmd_scan(ctx);
    if (history->parsed()) return cmd_history(ctx, from, to, expanded);
    if (expand->parsed()) return cmd_expand(ctx, depth);
    if (link->parsed()) return cmd_link(ctx, formats);
    if (stats->parsed()) return cmd_stats(ctx);
    if (diff->parsed()) return cmd_diff(ctx, w1, w2);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fetch::SeedFileError& e) {
    err << "seed file error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const store::WaveNotFound& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const store::CorruptLogError& e) {
    err << "error: " << e.what() << " (rerun with --skip-corrupt to skip damaged lines)\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace trackerlink::cli
