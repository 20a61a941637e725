#include "neighbor/language.hpp"

#include "neighbor/error.hpp"

namespace neighbor {

std::string_view to_string(Language lang) noexcept {
    switch (lang) {
        case Language::en: return "en";
        case Language::es: return "es";
        case Language::fr: return "fr";
        case Language::ar: return "ar";
    }
    return "en";
}

std::optional<Language> try_parse_language(std::string_view code) noexcept {
    for (Language lang : kAllLanguages) {
        if (to_string(lang) == code) return lang;
    }
    return std::nullopt;
}

Language parse_language(std::string_view code) {
    if (auto lang = try_parse_language(code)) return *lang;
    throw Error(ErrorCode::unsupported_language,
                "unsupported language code '" + std::string(code) + "'");
}

LocalizedText parse_localized(const nlohmann::json& j, std::string_view what) {
    if (!j.is_object()) {
        throw Error(ErrorCode::parse_error, std::string(what) + ": expected a language map");
    }
    LocalizedText out;
    for (Language lang : kAllLanguages) {
        auto it = j.find(std::string(to_string(lang)));
        if (it == j.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) {
            throw Error(ErrorCode::missing_variant, std::string(what) + ": missing '" +
                                                        std::string(to_string(lang)) + "' variant");
        }
        out.emplace(lang, it->get<std::string>());
    }
    return out;
}

}  // namespace neighbor
