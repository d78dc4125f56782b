#include "trackerlink/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "trackerlink/cli/export.hpp"

namespace trackerlink::cli {

using nlohmann::json;

namespace {

std::string join_domains(const std::vector<core::DomainKey>& v, const char* sep) {
  std::string out;
  for (const auto& d : v) {
    if (!out.empty()) out += sep;
    out += d.registrable;
  }
  return out;
}

std::string join_ids(const std::vector<core::TrackingId>& v, const char* sep) {
  std::string out;
  for (const auto& id : v) {
    if (!out.empty()) out += sep;
    out += id.canonical();
  }
  return out;
}

std::string format_ref(double v) {
  // Shortest form that round-trips the configured value, e.g. 84.79 or 11.
  char buf[64];
  for (int prec = 0; prec <= 9; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    if (std::fabs(std::strtod(buf, nullptr) - v) < 1e-12) return buf;
  }
  return format6(v);
}

json network_json(const graph::Network& n) {
  json j;
  j["network_id"] = n.network_id;
  j["dimension"] = n.dimension();
  j["members"] = json::array();
  for (const auto& m : n.members) j["members"].push_back(m.registrable);
  j["seed_members"] = json::array();
  for (const auto& m : n.seed_members) j["seed_members"].push_back(m.registrable);
  j["linking_ids"] = json::array();
  for (const auto& id : n.linking_ids) j["linking_ids"].push_back(id.canonical());
  j["all_ids"] = json::array();
  for (const auto& id : n.all_ids) j["all_ids"].push_back(id.canonical());
  return j;
}

json stats_block(const graph::NetworkStats& s) {
  return {{"n", s.n},       {"min", s.min},   {"max", s.max},
          {"mean", s.mean}, {"sd", s.sd},     {"sd_undefined", s.sd_undefined},
          {"mean_text", graph::format3(s.mean)}, {"sd_text", graph::format3(s.sd)}};
}

}  // namespace

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string Accounting::equation() const {
  return std::to_string(total) + " = " + std::to_string(active) + "+" + std::to_string(dead) + "+" +
         std::to_string(non_target) + "+" + std::to_string(platform);
}

Accounting accounting(const std::vector<core::SeedEntry>& seeds) {
  Accounting a;
  for (const auto& s : seeds) {
    ++a.total;
    switch (s.status) {
      case core::SeedStatus::Active: ++a.active; break;
      case core::SeedStatus::Dead: ++a.dead; break;
      case core::SeedStatus::NonTargetLanguage: ++a.non_target; break;
      case core::SeedStatus::PlatformManaged: ++a.platform; break;
    }
  }
  return a;
}

StatsReport build_stats_report(const core::ScanWave& wave, const std::vector<graph::Network>& networks,
                               const graph::AttributionGraph& g, const StatsSettings& settings) {
  StatsReport r;
  r.wave = wave.name;
  r.seeds = accounting(wave.seeds);
  r.networks = networks.size();
  r.singleton_domains = graph::singleton_domains(g, networks);
  for (const auto& n : networks) r.dimensions.push_back(n.dimension());
  r.sample = graph::network_stats(networks, graph::SdConvention::Sample);
  r.population = graph::network_stats(networks, graph::SdConvention::Population);
  r.primary = settings.sd_convention;
  r.coverage = graph::coverage_stats(wave);
  r.categories = graph::category_frequency(wave);
  r.notes = reference_notes(r, settings.reference);
  return r;
}

std::vector<ReferenceNote> reference_notes(const StatsReport& r, const ReferenceFigures& ref) {
  std::vector<ReferenceNote> notes;
  const double tol = ref.tolerance;
  auto simple = [&](const char* metric, double computed, const std::optional<double>& reference,
                    const std::string& shown) {
    if (!reference) return;
    ReferenceNote n{metric, computed, *reference, std::fabs(computed - *reference) <= tol, {}};
    n.text = std::string(metric) + ": computed " + shown + (n.matches ? " matches" : " differs from") +
             " reference " + format_ref(*reference);
    notes.push_back(std::move(n));
  };
  simple("networks", static_cast<double>(r.networks), ref.networks, std::to_string(r.networks));
  simple("min", static_cast<double>(r.sample.min), ref.min, std::to_string(r.sample.min));
  simple("max", static_cast<double>(r.sample.max), ref.max, std::to_string(r.sample.max));
  simple("mean", r.sample.mean, ref.mean, format6(r.sample.mean));

  if (ref.sd) {
    const bool pop = std::fabs(r.population.sd - *ref.sd) <= tol;
    const bool smp = !r.sample.sd_undefined && std::fabs(r.sample.sd - *ref.sd) <= tol;
    ReferenceNote n{"sd", pop ? r.population.sd : r.sample.sd, *ref.sd, pop || smp, {}};
    std::string conv = pop && smp ? "both conventions" : pop ? "the population convention" : "the sample convention";
    if (n.matches)
      n.text = "sd: reference " + format_ref(*ref.sd) + " matches " + conv + " (sample " + format6(r.sample.sd) +
               ", population " + format6(r.population.sd) + ")";
    else
      n.text = "sd: reference " + format_ref(*ref.sd) + " matches neither convention (sample " +
               format6(r.sample.sd) + ", population " + format6(r.population.sd) + ")";
    notes.push_back(std::move(n));
  }

  if (ref.coverage_percent) {
    const long long ref_h = std::llround(*ref.coverage_percent * 100.0);
    const double exact = r.coverage.active_seeds
                             ? 100.0 * static_cast<double>(r.coverage.seeds_with_id) / r.coverage.active_seeds
                             : 0.0;
    ReferenceNote n{"coverage_percent", r.coverage.percentage(), *ref.coverage_percent,
                    ref_h == r.coverage.percentage_hundredths, {}};
    char exact_buf[32];
    std::snprintf(exact_buf, sizeof exact_buf, "%.4f", exact);
    n.text = "coverage: computed " + r.coverage.percentage_text() + "% (" + std::to_string(r.coverage.seeds_with_id) +
             "/" + std::to_string(r.coverage.active_seeds) + " = " + exact_buf + "%)" +
             (n.matches ? " matches" : " differs from") + " reference " + format_ref(*ref.coverage_percent) + "%";
    if (!n.matches) n.text += "; the computed value is kept";
    notes.push_back(std::move(n));
  }
  return notes;
}

std::string stats_text(const StatsReport& r) {
  std::ostringstream x;
  x << "wave " << r.wave << "\n";
  if (!r.generated_at.empty()) x << "generated " << r.generated_at << "\n";
  x << "\nseeds " << r.seeds.equation() << " (active+dead+non-target+platform)\n";
  x << "\nnetworks " << r.networks << "\n";
  if (r.networks) {
    x << "  dimension min " << r.sample.min << ", max " << r.sample.max << ", mean " << graph::format3(r.sample.mean)
      << "\n";
    x << "  sd sample " << (r.sample.sd_undefined ? std::string("undefined") : graph::format3(r.sample.sd))
      << ", population " << graph::format3(r.population.sd) << " (primary: " << graph::to_string(r.primary)
      << ")\n";
    x << "  dimensions";
    for (auto d : r.dimensions) x << ' ' << d;
    x << "\n";
  }
  x << "  domains outside any network " << r.singleton_domains << "\n";
  x << "\ncoverage " << r.coverage.seeds_with_id << "/" << r.coverage.active_seeds << " = "
    << r.coverage.percentage_text() << "%\n";
  x << "\ncategories (active seeds)\n";
  for (const auto& [label, count] : r.categories.rows) x << "  " << label << ": " << count << "\n";
  x << "  total: " << r.categories.total << "\n";
  if (!r.notes.empty()) {
    x << "\nnotes\n";
    for (const auto& n : r.notes) x << "  " << (n.matches ? "[ok] " : "[discrepancy] ") << n.text << "\n";
  }
  return x.str();
}

std::string stats_json(const StatsReport& r) {
  json j;
  j["wave"] = r.wave;
  if (!r.generated_at.empty()) j["generated_at"] = r.generated_at;
  j["seeds"] = {{"total", r.seeds.total},
                {"active", r.seeds.active},
                {"dead", r.seeds.dead},
                {"non_target_language", r.seeds.non_target},
                {"platform_managed", r.seeds.platform},
                {"equation", r.seeds.equation()}};
  j["networks"] = r.networks;
  j["dimensions"] = r.dimensions;
  j["singleton_domains"] = r.singleton_domains;
  j["network_stats"] = {{"primary", graph::to_string(r.primary)},
                        {"sample", stats_block(r.sample)},
                        {"population", stats_block(r.population)}};
  j["coverage"] = {{"active_seeds", r.coverage.active_seeds},
                   {"seeds_with_id", r.coverage.seeds_with_id},
                   {"percentage", r.coverage.percentage_text()}};
  j["categories"] = json::array();
  for (const auto& [label, count] : r.categories.rows) j["categories"].push_back({{"label", label}, {"count", count}});
  j["notes"] = json::array();
  for (const auto& n : r.notes)
    j["notes"].push_back(
        {{"metric", n.metric}, {"computed", n.computed}, {"reference", n.reference}, {"matches", n.matches},
         {"text", n.text}});
  return j.dump(2) + "\n";
}

std::string stats_csv(const StatsReport& r) {
  std::ostringstream x;
  x << "section,metric,value\n";
  x << "seeds,total," << r.seeds.total << "\n"
    << "seeds,active," << r.seeds.active << "\n"
    << "seeds,dead," << r.seeds.dead << "\n"
    << "seeds,non_target_language," << r.seeds.non_target << "\n"
    << "seeds,platform_managed," << r.seeds.platform << "\n";
  x << "networks,n," << r.networks << "\n"
    << "networks,min," << r.sample.min << "\n"
    << "networks,max," << r.sample.max << "\n"
    << "networks,mean," << format6(r.sample.mean) << "\n"
    << "networks,sd_sample," << (r.sample.sd_undefined ? std::string() : format6(r.sample.sd)) << "\n"
    << "networks,sd_population," << format6(r.population.sd) << "\n"
    << "networks,singleton_domains," << r.singleton_domains << "\n";
  x << "coverage,active_seeds," << r.coverage.active_seeds << "\n"
    << "coverage,seeds_with_id," << r.coverage.seeds_with_id << "\n"
    << "coverage,percentage," << r.coverage.percentage_text() << "\n";
  for (const auto& [label, count] : r.categories.rows) x << "category," << csv_field(label) << "," << count << "\n";
  for (const auto& n : r.notes) x << "note," << n.metric << "," << csv_field(n.text) << "\n";
  return x.str();
}

std::string networks_text(const std::string& wave, const std::vector<graph::Network>& networks) {
  std::ostringstream x;
  x << "wave " << wave << ": " << networks.size() << " networks\n";
  for (const auto& n : networks) {
    x << "\n" << n.network_id << " (dimension " << n.dimension() << ")\n";
    x << "  members: " << join_domains(n.members, ", ") << "\n";
    x << "  seeds: " << join_domains(n.seed_members, ", ") << "\n";
    x << "  linking ids: " << join_ids(n.linking_ids, ", ") << "\n";
  }
  return x.str();
}

std::string networks_json(const std::string& wave, const std::vector<graph::Network>& networks) {
  json j;
  j["wave"] = wave;
  j["networks"] = json::array();
  for (const auto& n : networks) j["networks"].push_back(network_json(n));
  return j.dump(2) + "\n";
}

std::string networks_csv(const std::vector<graph::Network>& networks) {
  std::ostringstream x;
  x << "network_id,dimension,members,seed_members,linking_ids\n";
  for (const auto& n : networks)
    x << csv_field(n.network_id) << ',' << n.dimension() << ',' << csv_field(join_domains(n.members, ";")) << ','
      << csv_field(join_domains(n.seed_members, ";")) << ',' << csv_field(join_ids(n.linking_ids, ";")) << '\n';
  return x.str();
}

std::string diff_text(const graph::ChangeReport& r) {
  const auto& s = r.summary;
  std::ostringstream x;
  x << "diff " << r.from_wave << " -> " << r.to_wave << "\n\n";
  x << "domains compared " << s.domains_compared << "\n"
    << "AdSense deletions " << s.adsense_deletions << "\n"
    << "Analytics deletions " << s.ga_deletions << "\n"
    << "id kind additions " << s.kind_additions << "\n"
    << "networks dissolved " << s.networks_dissolved << "\n"
    << "networks new " << s.networks_new << "\n";
  if (!r.domains.empty()) {
    x << "\nchanged domains\n";
    for (const auto& d : r.domains) {
      x << "  " << d.domain.registrable;
      if (!d.ids_deleted.empty()) x << "  deleted " << join_ids(d.ids_deleted, ", ");
      if (!d.ids_added.empty()) x << "  added " << join_ids(d.ids_added, ", ");
      x << "\n";
    }
  }
  auto list = [&](const char* title, const std::vector<graph::Network>& v) {
    if (v.empty()) return;
    x << "\n" << title << "\n";
    for (const auto& n : v)
      x << "  " << n.network_id << " (dimension " << n.dimension() << ", linked by " << join_ids(n.linking_ids, ", ")
        << "): " << join_domains(n.members, ", ") << "\n";
  };
  list("dissolved networks", r.networks_dissolved);
  list("new networks", r.networks_new);
  return x.str();
}

std::string diff_json(const graph::ChangeReport& r, const std::string& generated_at) {
  const auto& s = r.summary;
  json j;
  j["from"] = r.from_wave;
  j["to"] = r.to_wave;
  if (!generated_at.empty()) j["generated_at"] = generated_at;
  j["summary"] = {{"domains_compared", s.domains_compared}, {"adsense_deletions", s.adsense_deletions},
                  {"ga_deletions", s.ga_deletions},         {"kind_additions", s.kind_additions},
                  {"networks_dissolved", s.networks_dissolved}, {"networks_new", s.networks_new}};
  j["domains"] = json::array();
  for (const auto& d : r.domains) {
    json dj;
    dj["domain"] = d.domain.registrable;
    dj["ids_added"] = json::array();
    for (const auto& id : d.ids_added) dj["ids_added"].push_back(id.canonical());
    dj["ids_deleted"] = json::array();
    for (const auto& id : d.ids_deleted) dj["ids_deleted"].push_back(id.canonical());
    dj["kinds_added"] = json::array();
    for (auto k : d.kinds_added) dj["kinds_added"].push_back(std::string(to_string(k)));
    j["domains"].push_back(std::move(dj));
  }
  j["networks_dissolved"] = json::array();
  for (const auto& n : r.networks_dissolved) j["networks_dissolved"].push_back(network_json(n));
  j["networks_new"] = json::array();
  for (const auto& n : r.networks_new) j["networks_new"].push_back(network_json(n));
  return j.dump(2) + "\n";
}

std::string diff_csv(const graph::ChangeReport& r) {
  std::ostringstream x;
  x << "change,subject,ids\n";
  for (const auto& d : r.domains) {
    if (!d.ids_deleted.empty())
      x << "ids_deleted," << csv_field(d.domain.registrable) << ',' << csv_field(join_ids(d.ids_deleted, ";")) << '\n';
    if (!d.ids_added.empty())
      x << "ids_added," << csv_field(d.domain.registrable) << ',' << csv_field(join_ids(d.ids_added, ";")) << '\n';
  }
  for (const auto& n : r.networks_dissolved)
    x << "network_dissolved," << csv_field(n.network_id) << ',' << csv_field(join_ids(n.linking_ids, ";")) << '\n';
  for (const auto& n : r.networks_new)
    x << "network_new," << csv_field(n.network_id) << ',' << csv_field(join_ids(n.linking_ids, ";")) << '\n';
  return x.str();
}

}  // namespace trackerlink::cli
