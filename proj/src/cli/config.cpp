#include "trackerlink/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "trackerlink/core/time.hpp"
#include "trackerlink/store/sha256.hpp"

namespace trackerlink::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

bool looks_like_credential(std::string key) {
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const char* bad : {"token", "secret", "password", "passwd", "api_key", "apikey"})
    if (key.find(bad) != std::string::npos) return true;
  return false;
}

void reject_credentials(const json& j, const std::string& path) {
  if (!j.is_object()) return;
  for (const auto& [k, v] : j.items()) {
    if (looks_like_credential(k))
      throw ConfigError("config key '" + path + k +
                        "' looks like a credential; provider credentials are read from the environment only");
    reject_credentials(v, path + k + ".");
  }
}

// Reads one object, remembering which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("'" + name() + "' must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  bool get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_[key].is_null()) return false;
    try {
      out = j_[key].get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config key '" + path_ + key + "' has the wrong type");
    }
    return true;
  }

  Section sub(const char* key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_[key] : empty, path_ + key + ".");
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("unknown config key '" + path_ + k + "'");
  }

  std::string key_path(const char* key) const { return path_ + key; }

 private:
  std::string name() const { return path_.empty() ? "config" : path_.substr(0, path_.size() - 1); }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

void check_positive(long long v, const std::string& key) {
  if (v < 0) throw ConfigError("config key '" + key + "' must not be negative");
}

bool is_ts_prefix(const std::string& s) {
  static const std::set<std::size_t> lengths{4, 6, 8, 10, 12, 14};
  return lengths.count(s.size()) && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::optional<double> opt_number(Section& s, const char* key) {
  double v = 0;
  if (s.get(key, v)) return v;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ProviderKind k) {
  switch (k) {
    case ProviderKind::None: return "none";
    case ProviderKind::Fixture: return "fixture";
    case ProviderKind::SpyOnWeb: return "spyonweb";
  }
  return "none";
}

RunConfig parse_config(const json& j, const fs::path& base_dir) {
  reject_credentials(j, "");
  RunConfig c;
  Section root(j, "");

  std::string s;
  if (root.get("seed_file", s)) c.seed_file = resolve(base_dir, s);
  root.get("wave", c.wave);
  if (root.get("store", s)) c.store = resolve(base_dir, s);
  if (root.get("output", s)) c.output = resolve(base_dir, s);
  if (root.get("replay_dir", s)) c.replay_dir = resolve(base_dir, s);

  {
    auto f = root.sub("fetch");
    f.get("user_agent_contact", c.user_agent_contact);
    f.get("respect_robots", c.fetch.respect_robots);
    long long ms = 0;
    if (f.get("per_domain_spacing_ms", ms)) {
      check_positive(ms, f.key_path("per_domain_spacing_ms"));
      c.politeness.per_domain_spacing = std::chrono::milliseconds(ms);
    }
    std::size_t n = 0;
    if (f.get("global_concurrency", n)) c.politeness.global_concurrency = std::max<std::size_t>(1, n);
    int retries = 0;
    if (f.get("retries", retries)) {
      check_positive(retries, f.key_path("retries"));
      c.fetch.retries = retries;
    }
    if (f.get("backoff_base_ms", ms)) c.fetch.backoff_base = std::chrono::milliseconds(ms);
    if (f.get("connect_timeout_ms", ms)) c.fetch.connect_timeout = std::chrono::milliseconds(ms);
    if (f.get("read_timeout_ms", ms)) c.fetch.read_timeout = std::chrono::milliseconds(ms);
    if (f.get("workers", n)) c.workers = std::max<std::size_t>(1, n);
    f.finish();
    c.fetch.user_agent = fetch::default_user_agent(c.user_agent_contact);
  }

  {
    auto k = root.sub("classify");
    k.get("target_language", c.classify.target_language);
    k.get("language_confidence", c.classify.language_confidence);
    if (c.classify.language_confidence < 0 || c.classify.language_confidence > 1)
      throw ConfigError("config key 'classify.language_confidence' must be in [0, 1]");
    k.get("platform_blocklist", c.classify.platform_blocklist);
    k.finish();
  }

  {
    auto e = root.sub("extract");
    e.get("enable_ga4", c.extract.normalize.enable_ga4);
    e.get("enable_gtm", c.extract.normalize.enable_gtm);
    e.get("placeholder_blocklist", c.extract.normalize.placeholder_blocklist);
    e.get("scan_window", c.extract.scan_window);
    e.get("script_follow_depth", c.extract.script_follow_depth);
    if (c.extract.script_follow_depth < 0 || c.extract.script_follow_depth > 1)
      throw ConfigError("config key 'extract.script_follow_depth' must be 0 or 1");
    e.get("script_cap", c.extract.script_cap);
    e.finish();
  }

  {
    auto a = root.sub("archive");
    a.get("endpoint", c.archive.endpoint);
    std::string g;
    if (a.get("granularity", g)) {
      auto parsed = archive::parse_granularity(g);
      if (!parsed) throw ConfigError("config key 'archive.granularity' must be month, year or every");
      c.archive.sampling.granularity = *parsed;
    }
    a.get("max_snapshots", c.archive.sampling.max_snapshots);
    a.get("throttle_retries", c.archive.throttle_retries);
    long long ms = 0;
    if (a.get("backoff_base_ms", ms)) c.archive.backoff_base = std::chrono::milliseconds(ms);
    a.get("from", c.history_from);
    a.get("to", c.history_to);
    for (const auto* v : {&c.history_from, &c.history_to})
      if (!v->empty() && !is_ts_prefix(*v))
        throw ConfigError("archive.from/to must be timestamps like 2019, 201904 or 20190401");
    a.finish();
  }

  {
    auto l = root.sub("lookup");
    std::string p;
    if (l.get("provider", p)) {
      if (p == "none")
        c.lookup.provider = ProviderKind::None;
      else if (p == "fixture")
        c.lookup.provider = ProviderKind::Fixture;
      else if (p == "spyonweb")
        c.lookup.provider = ProviderKind::SpyOnWeb;
      else
        throw ConfigError("config key 'lookup.provider' must be none, fixture or spyonweb");
    }
    if (l.get("fixture_dir", s)) c.lookup.fixture_dir = resolve(base_dir, s);
    l.get("endpoint", c.lookup.endpoint);
    l.get("expand_depth", c.lookup.expand_depth);
    if (c.lookup.expand_depth < 1 || c.lookup.expand_depth > lookup::kMaxExpandDepth)
      throw ConfigError("config key 'lookup.expand_depth' must be 1 or 2");
    long long v = 0;
    if (l.get("min_interval_ms", v)) c.lookup.service.min_interval = std::chrono::milliseconds(v);
    if (l.get("cache_ttl_days", v)) c.lookup.service.cache_ttl = std::chrono::hours(24 * v);
    if (l.get("reference_date", s)) {
      c.lookup.reference_date = core::parse_date(s);
      if (!c.lookup.reference_date) throw ConfigError("config key 'lookup.reference_date' must be YYYY-MM-DD");
    }
    auto r = l.sub("relic");
    r.get("blocklist_enabled", c.lookup.relic.use_blocklist);
    r.get("blocklist", c.lookup.relic.blocklist);
    r.get("stale_enabled", c.lookup.relic.use_staleness);
    r.get("horizon_years", c.lookup.relic.horizon_years);
    r.get("verify_live", c.lookup.relic.verify_live);
    r.get("drop_self", c.lookup.relic.drop_self);
    r.finish();
    l.finish();
    if (c.lookup.provider == ProviderKind::Fixture && c.lookup.fixture_dir.empty())
      throw ConfigError("lookup.provider fixture needs lookup.fixture_dir");
  }

  {
    auto st = root.sub("stats");
    std::string conv;
    if (st.get("sd_convention", conv)) {
      auto parsed = graph::parse_sd_convention(conv);
      if (!parsed) throw ConfigError("config key 'stats.sd_convention' must be sample or population");
      c.stats.sd_convention = *parsed;
    }
    auto ref = st.sub("reference");
    auto& rf = c.stats.reference;
    rf.networks = opt_number(ref, "networks");
    rf.min = opt_number(ref, "min");
    rf.max = opt_number(ref, "max");
    rf.mean = opt_number(ref, "mean");
    rf.sd = opt_number(ref, "sd");
    rf.coverage_percent = opt_number(ref, "coverage_percent");
    ref.get("tolerance", rf.tolerance);
    ref.finish();
    st.finish();
  }

  root.finish();
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json config_to_json(const RunConfig& c) {
  json j;
  j["seed_file"] = c.seed_file.string();
  j["wave"] = c.wave;
  j["store"] = c.store.string();
  j["output"] = c.output.string();
  j["replay_dir"] = c.replay_dir.string();
  j["fetch"] = {{"user_agent_contact", c.user_agent_contact},
                {"respect_robots", c.fetch.respect_robots},
                {"per_domain_spacing_ms", c.politeness.per_domain_spacing.count()},
                {"global_concurrency", c.politeness.global_concurrency},
                {"retries", c.fetch.retries},
                {"backoff_base_ms", c.fetch.backoff_base.count()},
                {"connect_timeout_ms", c.fetch.connect_timeout.count()},
                {"read_timeout_ms", c.fetch.read_timeout.count()},
                {"workers", c.workers}};
  j["classify"] = {{"target_language", c.classify.target_language},
                   {"language_confidence", c.classify.language_confidence},
                   {"platform_blocklist", c.classify.platform_blocklist}};
  j["extract"] = {{"enable_ga4", c.extract.normalize.enable_ga4},
                  {"enable_gtm", c.extract.normalize.enable_gtm},
                  {"placeholder_blocklist", c.extract.normalize.placeholder_blocklist},
                  {"scan_window", c.extract.scan_window},
                  {"script_follow_depth", c.extract.script_follow_depth},
                  {"script_cap", c.extract.script_cap}};
  j["archive"] = {{"endpoint", c.archive.endpoint},
                  {"granularity", std::string(archive::to_string(c.archive.sampling.granularity))},
                  {"max_snapshots", c.archive.sampling.max_snapshots},
                  {"throttle_retries", c.archive.throttle_retries},
                  {"backoff_base_ms", c.archive.backoff_base.count()},
                  {"from", c.history_from},
                  {"to", c.history_to}};
  const auto& r = c.lookup.relic;
  j["lookup"] = {{"provider", std::string(to_string(c.lookup.provider))},
                 {"fixture_dir", c.lookup.fixture_dir.string()},
                 {"endpoint", c.lookup.endpoint},
                 {"expand_depth", c.lookup.expand_depth},
                 {"min_interval_ms", c.lookup.service.min_interval.count()},
                 {"cache_ttl_days", std::chrono::duration_cast<std::chrono::hours>(c.lookup.service.cache_ttl).count() / 24},
                 {"reference_date", c.lookup.reference_date ? json(core::format_date(*c.lookup.reference_date)) : json()},
                 {"relic",
                  {{"blocklist_enabled", r.use_blocklist},
                   {"blocklist", r.blocklist},
                   {"stale_enabled", r.use_staleness},
                   {"horizon_years", r.horizon_years},
                   {"verify_live", r.verify_live},
                   {"drop_self", r.drop_self}}}};
  json ref = json::object();
  const auto& rf = c.stats.reference;
  auto put = [&](const char* k, const std::optional<double>& v) {
    if (v) ref[k] = *v;
  };
  put("networks", rf.networks);
  put("min", rf.min);
  put("max", rf.max);
  put("mean", rf.mean);
  put("sd", rf.sd);
  put("coverage_percent", rf.coverage_percent);
  ref["tolerance"] = rf.tolerance;
  j["stats"] = {{"sd_convention", graph::to_string(c.stats.sd_convention)}, {"reference", ref}};
  return j;
}

std::string config_hash(const RunConfig& c) {
  auto j = config_to_json(c);
  for (const char* k : {"seed_file", "wave", "store", "output", "replay_dir"}) j.erase(k);
  j["lookup"].erase("fixture_dir");
  // nlohmann objects are key-sorted, so dump() is canonical.
  return store::sha256_hex(j.dump());
}

}  // namespace trackerlink::cli
