#include "trackerlink/fetch/seeds.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "trackerlink/core/text.hpp"

namespace trackerlink::fetch {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t i = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;  // BOM

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };

  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !field_started) {
      quoted = field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      // CRLF; a lone CR is dropped too
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<SeedRow> parse_seed_csv(std::string_view text) {
  auto rows = parse_csv(text);
  if (rows.empty()) return {};
  std::size_t col_domain = SIZE_MAX, col_category = SIZE_MAX, col_override = SIZE_MAX;
  for (std::size_t c = 0; c < rows[0].size(); ++c) {
    const auto name = core::to_lower_ascii(core::trim(rows[0][c]));
    if (name == "domain") col_domain = c;
    if (name == "category") col_category = c;
    if (name == "override_status") col_override = c;
  }
  if (col_domain == SIZE_MAX) throw SeedFileError("seed file has no 'domain' column");

  auto cell = [](const std::vector<std::string>& r, std::size_t c) -> std::string {
    return c < r.size() ? std::string(core::trim(r[c])) : std::string();
  };

  std::vector<SeedRow> out;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t line = r + 1;
    const auto domain = cell(rows[r], col_domain);
    if (domain.empty()) continue;
    auto key = core::try_registrable_domain(domain);
    if (!key) throw SeedFileError("line " + std::to_string(line) + ": not a domain: " + domain);
    if (!seen.insert(key->registrable).second) continue;
    SeedRow row;
    row.domain = *key;
    row.line = line;
    if (auto cat = cell(rows[r], col_category); !cat.empty()) row.category = cat;
    if (auto ov = cell(rows[r], col_override); !ov.empty()) {
      std::string upper;
      for (char ch : ov) upper.push_back(ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
      auto status = core::parse_seed_status(upper);
      if (!status) throw SeedFileError("line " + std::to_string(line) + ": unknown override_status '" + ov + "'");
      row.override_status = status;
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<SeedRow> load_seed_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SeedFileError("cannot read seed file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_seed_csv(ss.str());
}

bool on_platform_blocklist(const core::DomainKey& domain, const std::vector<std::string>& blocklist) {
  for (const std::string& host : {domain.original_host, domain.registrable}) {
    std::string_view h = host;
    while (!h.empty()) {
      for (const auto& entry : blocklist)
        if (h == entry) return true;
      const auto dot = h.find('.');
      if (dot == std::string_view::npos) break;
      h.remove_prefix(dot + 1);
    }
  }
  return false;
}

Classification classify_seed(const SeedRow& seed, const FetchOutcome* outcome, const ClassifyConfig& config,
                             const LanguageDetector& detector) {
  Classification c;
  if (seed.override_status) {
    c.status = *seed.override_status;
    c.reason = "manual override";
    return c;
  }
  if (on_platform_blocklist(seed.domain, config.platform_blocklist)) {
    c.status = core::SeedStatus::PlatformManaged;
    c.reason = "platform-managed host";
    return c;
  }
  if (!outcome) {
    c.reason = "not fetched";
    return c;
  }
  if (!*outcome) {
    const auto& f = outcome->error();
    if (f.hard()) {
      c.status = core::SeedStatus::Dead;
      c.reason = std::string("fetch failed: ") + to_string(f.reason);
    } else {
      c.reason = std::string("not fetched: ") + to_string(f.reason);
    }
    return c;
  }
  const auto text = visible_text(to_utf8((*outcome)->body, (*outcome)->content_type));
  const auto ranked = detector.rank(text);
  if (ranked.empty()) {
    c.reason = "no text to classify";
    return c;
  }
  c.detected_language = ranked.front().lang;
  c.language_confidence = ranked.front().posterior;
  if (c.detected_language != config.target_language && c.language_confidence >= config.language_confidence) {
    c.status = core::SeedStatus::NonTargetLanguage;
    c.reason = "language " + c.detected_language;
  } else {
    c.reason = "ok";
  }
  return c;
}

}  // namespace trackerlink::fetch
