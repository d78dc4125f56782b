#include "trackerlink/core/time.hpp"

#include <charconv>
#include <cstdio>

namespace trackerlink::core {

using namespace std::chrono;

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return true;
}

std::optional<Timestamp> make_instant(int y, int mo, int d, int h, int mi, int se) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 60) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
}

}  // namespace

Timestamp now_utc() { return time_point_cast<seconds>(system_clock::now()); }

std::string format_iso8601(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                static_cast<long>(hms.seconds().count()));
  return buf;
}

std::optional<Timestamp> parse_iso8601(std::string_view s) {
  int y, mo, d, h = 0, mi = 0, se = 0;
  if (!read_int(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !read_int(s, 5, 2, mo) || s[7] != '-' ||
      !read_int(s, 8, 2, d))
    return std::nullopt;
  if (s.size() > 10) {
    if ((s[10] != 'T' && s[10] != ' ') || s.size() < 19 || !read_int(s, 11, 2, h) || s[13] != ':' ||
        !read_int(s, 14, 2, mi) || s[16] != ':' || !read_int(s, 17, 2, se))
      return std::nullopt;
    auto rest = s.substr(19);
    if (!(rest.empty() || rest == "Z" || rest == "+00:00")) return std::nullopt;
  }
  return make_instant(y, mo, d, h, mi, se);
}

std::string format_archive_ts(Timestamp t) {
  auto iso = format_iso8601(t);
  std::string out;
  for (char c : iso)
    if (c >= '0' && c <= '9') out += c;
  return out;
}

std::optional<Timestamp> parse_archive_ts(std::string_view s) {
  if (s.size() < 4 || s.size() > 14 || s.size() % 2 != 0) return std::nullopt;
  int fields[6] = {0, 1, 1, 0, 0, 0};
  if (!read_int(s, 0, 4, fields[0])) return std::nullopt;
  for (std::size_t i = 1; 4 + 2 * i <= s.size(); ++i)
    if (!read_int(s, 2 + 2 * i, 2, fields[i])) return std::nullopt;
  return make_instant(fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]);
}

std::optional<year_month_day> parse_date(std::string_view s) {
  if (s.size() < 10) return std::nullopt;
  auto t = parse_iso8601(s.substr(0, 10));
  if (!t) return std::nullopt;
  return year_month_day{floor<days>(*t)};
}

std::string format_date(year_month_day d) {
  return format_iso8601(sys_days{d}).substr(0, 10);
}

}  // namespace trackerlink::core
