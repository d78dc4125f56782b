#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace trackerlink::core {

using Timestamp = std::chrono::sys_seconds;

Timestamp now_utc();

/// `2021-05-03T10:15:00Z`
std::string format_iso8601(Timestamp t);
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Archive timestamps: `YYYYMMDDhhmmss`, with trailing fields optional
/// (`2019`, `201905` ...), as accepted by CDX queries.
std::string format_archive_ts(Timestamp t);
std::optional<Timestamp> parse_archive_ts(std::string_view text);

/// `YYYY-MM-DD`
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);
std::string format_date(std::chrono::year_month_day d);

}  // namespace trackerlink::core
