#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trackerlink/core/model.hpp"
#include "trackerlink/fetch/fetcher.hpp"
#include "trackerlink/fetch/language.hpp"

namespace trackerlink::fetch {

class SeedFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeedRow {
  core::DomainKey domain;
  std::optional<std::string> category;
  std::optional<core::SeedStatus> override_status;
  std::size_t line = 0;
};

/// RFC 4180 reader for `domain,category,override_status`. Extra columns are
/// ignored; category and override are optional. Duplicate registrable domains
/// keep their first row. Throws SeedFileError on a missing domain column,
/// an unknown override value or an unparsable domain.
std::vector<SeedRow> parse_seed_csv(std::string_view text);
std::vector<SeedRow> load_seed_file(const std::filesystem::path& path);

/// Splits one CSV document into records (quoted fields, doubled quotes,
/// CRLF). Exposed for tests.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

struct ClassifyConfig {
  std::string target_language = "sk";
  double language_confidence = 0.7;
  std::vector<std::string> platform_blocklist = {"livejournal.com"};
};

struct Classification {
  core::SeedStatus status = core::SeedStatus::Active;
  std::string reason;  // short human-readable explanation
  std::string detected_language;
  double language_confidence = 0.0;
};

/// Total: every seed gets exactly one status. Manual override wins, then
/// platform, then dead, then language.
Classification classify_seed(const SeedRow& seed, const FetchOutcome* outcome, const ClassifyConfig& config,
                             const LanguageDetector& detector = LanguageDetector::builtin());

/// True if the host or any of its parent domains is listed.
bool on_platform_blocklist(const core::DomainKey& domain, const std::vector<std::string>& blocklist);

}  // namespace trackerlink::fetch
