#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace trackerlink::core {

/// Decodes UTF-8, replacing every invalid byte with U+FFFD.
std::u32string decode_utf8_lossy(std::string_view bytes);
std::string encode_utf8(std::u32string_view text);
/// Re-encodes `bytes` as valid UTF-8 (lossy).
std::string lossy_utf8(std::string_view bytes);

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace trackerlink::core
