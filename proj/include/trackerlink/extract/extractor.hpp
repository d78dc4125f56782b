#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "trackerlink/core/model.hpp"

namespace trackerlink::extract {

inline constexpr std::size_t kDefaultScanWindow = 5u * 1024u * 1024u;
inline constexpr std::size_t kMaxContextChars = 120;

struct ExtractorConfig {
  core::NormalizeOptions normalize;
  std::size_t scan_window = kDefaultScanWindow;
  // Same-registrable-domain external scripts fetched per page.
  int script_follow_depth = 1;
  std::size_t script_cap = 20;
};

struct RawIdHit {
  std::string raw_token;
  std::size_t byte_offset = 0;
  std::string context_snippet;
  std::string source_url;
};

/// Full-text scan of `body` for tracking-id candidates.
///
/// Scanning works on the raw bytes (all id patterns are ASCII, so any
/// ASCII-compatible encoding is covered); only the context snippet is
/// lossily decoded. Hits are non-overlapping and in document order.
std::vector<RawIdHit> extract_ids(std::string_view body, std::string_view source_url,
                                  const ExtractorConfig& config = {});

struct ObservationBatch {
  std::vector<core::Observation> observations;
  std::size_t rejected = 0;
  std::map<core::RejectReason, std::size_t> rejected_by_reason;
};

/// Normalizes hits and drops rejects, deduplicating on (domain, identity,
/// provenance class). The first hit of an identity supplies the source url.
ObservationBatch hits_to_observations(const std::vector<RawIdHit>& hits, const core::DomainKey& domain,
                                      const core::Provenance& provenance, const ExtractorConfig& config = {},
                                      core::Timestamp observed_at = core::now_utc(), std::string blob_hash = {});

/// `src` attributes of `<script>` tags, resolved against `page_url`, in
/// document order without duplicates.
std::vector<std::string> find_script_sources(std::string_view body, std::string_view page_url);

/// Script sources on the same registrable domain as `page_url`, capped at
/// `config.script_cap` (empty when following is disabled).
std::vector<std::string> same_domain_scripts(std::string_view body, std::string_view page_url,
                                             const ExtractorConfig& config);

}  // namespace trackerlink::extract
