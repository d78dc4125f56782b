#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trackerlink::fetch {

/// Charset named in a Content-Type header or <meta> tag, lower-cased, or "".
std::string sniff_charset(std::string_view body, std::string_view content_type = {});

/// Converts a page to UTF-8. A declared non-UTF-8 charset is transcoded with
/// iconv; undeclared bytes that are not valid UTF-8 are read as windows-1250,
/// the usual legacy encoding for the region.
std::string to_utf8(std::string_view body, std::string_view content_type = {});

/// Visible text of an HTML document: tags, scripts, styles and comments
/// removed, common entities decoded, whitespace collapsed. Input must be UTF-8.
std::string visible_text(std::string_view html);

struct LanguageScore {
  std::string lang;
  double posterior = 0.0;
};

class LanguageDetector {
 public:
  /// Profiles bundled with the library (sk, cs, en, de, hu, pl, ru).
  static const LanguageDetector& builtin();

  /// Loads langdetect-style JSON profiles: {"name", "freq": {gram: count}, "n_words": [n1, n2, n3]}.
  void add_profile(std::string_view json);

  /// Naive Bayes over character 1-3 grams with a uniform prior. Sorted by
  /// posterior, highest first. Empty when the text has no usable grams.
  std::vector<LanguageScore> rank(std::string_view utf8_text) const;

  std::vector<std::string> languages() const;

 private:
  struct Profile {
    std::string name;
    double totals[3] = {0, 0, 0};
    double min_count[3] = {1e300, 1e300, 1e300};
  };
  std::vector<Profile> profiles_;
  // gram -> per-profile count
  std::unordered_map<std::u32string, std::vector<double>> counts_;
};

/// Grams of one text in the order they occur; exposed for tests.
std::vector<std::u32string> text_grams(std::string_view utf8_text, std::size_t max_words = 0);

}  // namespace trackerlink::fetch
