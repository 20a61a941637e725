#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace neighbor::text {

/// Decodes UTF-8 into code points. Malformed bytes decode as U+FFFD.
std::u32string decode_utf8(std::string_view in);
void append_utf8(std::string& out, char32_t cp);

std::size_t code_point_count(std::string_view in);

bool is_punctuation(char32_t cp) noexcept;
bool is_space(char32_t cp) noexcept;

std::string trim(std::string_view in);
std::vector<std::string> split(std::string_view in, char sep);

// RFC 3986 unreserved characters pass through; everything else is %XX.
std::string percent_encode(std::string_view in);
// Accepts '+' as space. Throws std::invalid_argument on a malformed escape.
std::string percent_decode(std::string_view in);

std::string read_file(const std::string& path);

}  // namespace neighbor::text
