#include "trackerlink/fetch/language.hpp"

#include <iconv.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "trackerlink/core/text.hpp"

namespace trackerlink::fetch {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_language_profiles();
}

namespace {

std::string charset_after(std::string_view lower, std::size_t pos) {
  pos = lower.find("charset", pos);
  if (pos == std::string_view::npos) return {};
  pos += 7;
  while (pos < lower.size() && (lower[pos] == ' ' || lower[pos] == '=' || lower[pos] == '"' || lower[pos] == '\''))
    ++pos;
  std::size_t end = pos;
  while (end < lower.size() && (std::isalnum(static_cast<unsigned char>(lower[end])) || lower[end] == '-' ||
                                lower[end] == '_' || lower[end] == ':' || lower[end] == '.'))
    ++end;
  return std::string(lower.substr(pos, end - pos));
}

bool is_utf8_name(const std::string& cs) { return cs == "utf-8" || cs == "utf8"; }

bool valid_utf8(std::string_view s) { return core::lossy_utf8(s) == s; }

std::string iconv_to_utf8(std::string_view in, const std::string& from) {
  iconv_t cd = ::iconv_open("UTF-8", from.c_str());
  if (cd == reinterpret_cast<iconv_t>(-1)) return core::lossy_utf8(in);
  std::string out;
  out.resize(in.size() * 4 + 16);
  char* src = const_cast<char*>(in.data());
  std::size_t src_left = in.size();
  char* dst = out.data();
  std::size_t dst_left = out.size();
  while (src_left > 0) {
    const std::size_t rc = ::iconv(cd, &src, &src_left, &dst, &dst_left);
    if (rc != static_cast<std::size_t>(-1)) break;
    if (errno == EILSEQ || errno == EINVAL) {
      // Unmappable byte: emit U+FFFD and move on.
      if (dst_left < 3) break;
      *dst++ = '\xEF';
      *dst++ = '\xBF';
      *dst++ = '\xBD';
      dst_left -= 3;
      ++src;
      --src_left;
    } else {
      break;
    }
  }
  ::iconv_close(cd);
  out.resize(out.size() - dst_left);
  return out;
}

struct Entity {
  std::string_view name;
  char32_t cp;
};

// Enough of the HTML entity table for Central European text.
constexpr Entity kEntities[] = {
    {"amp", '&'},        {"lt", '<'},          {"gt", '>'},          {"quot", '"'},        {"apos", '\''},
    {"nbsp", ' '},       {"aacute", 0xE1},     {"Aacute", 0xC1},     {"eacute", 0xE9},     {"Eacute", 0xC9},
    {"iacute", 0xED},    {"Iacute", 0xCD},     {"oacute", 0xF3},     {"Oacute", 0xD3},     {"uacute", 0xFA},
    {"Uacute", 0xDA},    {"yacute", 0xFD},     {"Yacute", 0xDD},     {"auml", 0xE4},       {"Auml", 0xC4},
    {"ouml", 0xF6},      {"Ouml", 0xD6},       {"uuml", 0xFC},       {"Uuml", 0xDC},       {"ocirc", 0xF4},
    {"Ocirc", 0xD4},     {"scaron", 0x161},    {"Scaron", 0x160},    {"ccaron", 0x10D},    {"Ccaron", 0x10C},
    {"zcaron", 0x17E},   {"Zcaron", 0x17D},    {"ncaron", 0x148},    {"Ncaron", 0x147},    {"rcaron", 0x159},
    {"Rcaron", 0x158},   {"ecaron", 0x11B},    {"Ecaron", 0x11A},    {"dcaron", 0x10F},    {"Dcaron", 0x10E},
    {"tcaron", 0x165},   {"Tcaron", 0x164},    {"lcaron", 0x13E},    {"Lcaron", 0x13D},    {"uring", 0x16F},
    {"Uring", 0x16E},    {"lacute", 0x13A},    {"racute", 0x155},    {"ndash", 0x2013},    {"mdash", 0x2014},
    {"hellip", 0x2026},  {"bdquo", 0x201E},    {"ldquo", 0x201C},    {"rdquo", 0x201D},    {"copy", 0xA9},
    {"middot", 0xB7},    {"laquo", 0xAB},      {"raquo", 0xBB},      {"bull", 0x2022},     {"euro", 0x20AC},
};

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
  return true;
}

std::size_t find_ci(std::string_view s, std::size_t pos, std::string_view needle) {
  for (; pos + needle.size() <= s.size(); ++pos)
    if (starts_with_ci(s, pos, needle)) return pos;
  return std::string_view::npos;
}

bool is_letter(char32_t c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
  if (c >= 0xC0 && c <= 0x24F) return c != 0xD7 && c != 0xF7;
  if (c >= 0x370 && c <= 0x3FF) return true;  // Greek
  if (c >= 0x400 && c <= 0x4FF) return true;  // Cyrillic
  return false;
}

bool is_upper(char32_t c) {
  if (c >= 'A' && c <= 'Z') return true;
  if (c >= 0xC0 && c <= 0xDE) return c != 0xD7;
  if (c >= 0x100 && c <= 0x137) return c % 2 == 0;
  if (c >= 0x139 && c <= 0x148) return c % 2 == 1;
  if (c >= 0x14A && c <= 0x177) return c % 2 == 0;
  if (c == 0x178 || c == 0x179 || c == 0x17B || c == 0x17D) return true;
  if (c >= 0x400 && c <= 0x42F) return true;
  return false;
}

}  // namespace

std::string sniff_charset(std::string_view body, std::string_view content_type) {
  const std::string ct = core::to_lower_ascii(content_type);
  if (auto cs = charset_after(ct, 0); !cs.empty()) return cs;
  const std::string head = core::to_lower_ascii(body.substr(0, std::min<std::size_t>(body.size(), 8192)));
  for (std::size_t pos = head.find("<meta"); pos != std::string::npos; pos = head.find("<meta", pos + 5)) {
    const std::size_t end = head.find('>', pos);
    const std::string_view tag = std::string_view(head).substr(pos, end == std::string::npos ? head.size() - pos : end - pos);
    if (auto cs = charset_after(tag, 0); !cs.empty()) return cs;
  }
  return {};
}

std::string to_utf8(std::string_view body, std::string_view content_type) {
  std::string cs = sniff_charset(body, content_type);
  if (cs == "iso-8859-1" || cs == "latin1" || cs == "us-ascii") cs = "windows-1252";  // as browsers do
  if (cs.empty() || is_utf8_name(cs)) {
    if (valid_utf8(body)) return std::string(body);
    return iconv_to_utf8(body, "WINDOWS-1250");
  }
  return iconv_to_utf8(body, cs);
}

std::string visible_text(std::string_view html) {
  std::string out;
  out.reserve(html.size() / 2);
  auto push_space = [&] {
    if (!out.empty() && out.back() != ' ') out.push_back(' ');
  };
  std::size_t i = 0;
  while (i < html.size()) {
    const char c = html[i];
    if (c == '<') {
      if (html.compare(i, 4, "<!--") == 0) {
        auto end = html.find("-->", i + 4);
        i = end == std::string_view::npos ? html.size() : end + 3;
        continue;
      }
      // Raw-text elements: skip to the matching close tag.
      for (std::string_view raw : {std::string_view("script"), std::string_view("style"), std::string_view("noscript")}) {
        const std::size_t after = i + 1 + raw.size();
        if (starts_with_ci(html, i + 1, raw) && after < html.size() &&
            !std::isalnum(static_cast<unsigned char>(html[after]))) {
          auto end = find_ci(html, after, "</" + std::string(raw));
          if (end != std::string_view::npos) i = end;
          break;
        }
      }
      auto gt = html.find('>', i);
      i = gt == std::string_view::npos ? html.size() : gt + 1;
      push_space();
      continue;
    }
    if (c == '&') {
      auto semi = html.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 10) {
        const std::string_view name = html.substr(i + 1, semi - i - 1);
        char32_t cp = 0;
        if (!name.empty() && name[0] == '#') {
          const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
          const auto digits = name.substr(hex ? 2 : 1);
          if (!digits.empty() && digits.find_first_not_of(hex ? "0123456789abcdefABCDEF" : "0123456789") == std::string_view::npos)
            cp = static_cast<char32_t>(std::stoul(std::string(digits), nullptr, hex ? 16 : 10));
        } else {
          for (const auto& e : kEntities)
            if (e.name == name) cp = e.cp;
        }
        if (cp != 0 && cp < 0x110000) {
          if (cp == ' ' || cp == 0xA0)
            push_space();
          else
            out += core::encode_utf8(std::u32string(1, cp));
          i = semi + 1;
          continue;
        }
      }
    }
    if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
      push_space();
    } else {
      out.push_back(c);
    }
    ++i;
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  if (!out.empty() && out.front() == ' ') out.erase(out.begin());
  return out;
}

std::vector<std::u32string> text_grams(std::string_view utf8_text, std::size_t max_words) {
  std::vector<std::u32string> grams;
  const std::u32string text = core::decode_utf8_lossy(utf8_text);
  std::size_t words = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_letter(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && is_letter(text[j])) ++j;
    if (j == i) break;
    const std::u32string word = text.substr(i, j - i);
    i = j;
    // Acronyms and shouting carry no language signal.
    bool caps_run = false;
    for (std::size_t k = 1; k < word.size(); ++k)
      if (is_upper(word[k]) && is_upper(word[k - 1])) caps_run = true;
    if (caps_run) continue;
    const std::u32string padded = U" " + word + U" ";
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t p = 0; p + n <= padded.size(); ++p) {
        if (n == 1 && padded[p] == U' ') continue;
        grams.push_back(padded.substr(p, n));
      }
    if (max_words && ++words >= max_words) break;
  }
  return grams;
}

void LanguageDetector::add_profile(std::string_view json) {
  const auto doc = nlohmann::json::parse(json);
  Profile p;
  p.name = doc.at("name").get<std::string>();
  const auto totals = doc.at("n_words").get<std::vector<double>>();
  for (std::size_t n = 0; n < 3 && n < totals.size(); ++n) p.totals[n] = totals[n];
  const std::size_t idx = profiles_.size();
  profiles_.push_back(p);
  for (auto& [_, counts] : counts_) counts.resize(profiles_.size(), 0.0);
  for (auto& [gram, count] : doc.at("freq").items()) {
    const std::u32string key = core::decode_utf8_lossy(gram);
    if (key.empty() || key.size() > 3) continue;
    auto& slot = counts_[key];
    slot.resize(profiles_.size(), 0.0);
    slot[idx] = count.get<double>();
    auto& floor = profiles_[idx].min_count[key.size() - 1];
    floor = std::min(floor, slot[idx]);
  }
}

const LanguageDetector& LanguageDetector::builtin() {
  static const LanguageDetector det = [] {
    LanguageDetector d;
    for (const auto& [_, json] : detail::embedded_language_profiles()) d.add_profile(json);
    return d;
  }();
  return det;
}

std::vector<std::string> LanguageDetector::languages() const {
  std::vector<std::string> out;
  for (const auto& p : profiles_) out.push_back(p.name);
  return out;
}

std::vector<LanguageScore> LanguageDetector::rank(std::string_view utf8_text) const {
  const std::size_t L = profiles_.size();
  if (L == 0) return {};

  std::vector<double> log_score(L, 0.0);
  std::size_t used = 0;
  for (const auto& g : text_grams(utf8_text, 2000)) {
    auto it = counts_.find(g);
    if (it == counts_.end()) continue;
    ++used;
    const std::size_t n = g.size() - 1;
    for (std::size_t l = 0; l < L; ++l) {
      // Grams a profile pruned away get half its smallest retained count.
      const double c = it->second[l] > 0 ? it->second[l] : 0.5 * profiles_[l].min_count[n];
      log_score[l] += std::log(c / profiles_[l].totals[n]);
    }
  }
  if (used == 0) return {};

  const double top = *std::max_element(log_score.begin(), log_score.end());
  double z = 0;
  for (double s : log_score) z += std::exp(s - top);
  std::vector<LanguageScore> out;
  for (std::size_t l = 0; l < L; ++l) out.push_back({profiles_[l].name, std::exp(log_score[l] - top) / z});
  std::sort(out.begin(), out.end(), [](const LanguageScore& a, const LanguageScore& b) {
    if (a.posterior != b.posterior) return a.posterior > b.posterior;
    return a.lang < b.lang;
  });
  return out;
}

}  // namespace trackerlink::fetch
