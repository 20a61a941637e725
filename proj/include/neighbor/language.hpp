#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace neighbor {

enum class Language { en, es, fr, ar };

inline constexpr std::array<Language, 4> kAllLanguages{Language::en, Language::es, Language::fr,
                                                        Language::ar};

std::string_view to_string(Language lang) noexcept;
std::optional<Language> try_parse_language(std::string_view code) noexcept;

// Throws Error{unsupported_language}.
Language parse_language(std::string_view code);

/// Text carried in every supported language.
using LocalizedText = std::map<Language, std::string>;

// Reads {"en": "...", "es": "...", ...}. Every language must be present and
// non-empty; the thrown Error names `what` and the missing code.
LocalizedText parse_localized(const nlohmann::json& j, std::string_view what);

}  // namespace neighbor
