#include "neighbor/translator.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "neighbor/error.hpp"
#include "neighbor/text.hpp"

namespace neighbor::translator {
namespace {

bool known_category(std::string_view name) {
    return std::find(kPhraseCategories.begin(), kPhraseCategories.end(), name) !=
           kPhraseCategories.end();
}

LocalizedText localized_or(const nlohmann::json& rec, const char* key, const std::string& id,
                           ErrorCode missing) {
    auto it = rec.find(key);
    if (it == rec.end()) {
        throw Error(missing, "phrase '" + id + "': no '" + key + "' map");
    }
    try {
        return parse_localized(*it, "phrase '" + id + "' " + key);
    } catch (const Error& e) {
        throw Error(missing, e.what());
    }
}

}  // namespace

PhraseBank parse_phrase_bank(std::string_view content) {
    PhraseBank bank;
    bank.categories.assign(kPhraseCategories.begin(), kPhraseCategories.end());
    std::unordered_set<std::string> ids;
    std::size_t line_no = 0;
    for (const auto& line : text::split(content, '\n')) {
        ++line_no;
        auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(trimmed);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::parse_error,
                        "phrase bank line " + std::to_string(line_no) + ": " + e.what());
        }
        PhraseEntry entry;
        entry.phrase_id = rec.value("id", "");
        entry.category = rec.value("category", "");
        if (entry.phrase_id.empty()) {
            throw Error(ErrorCode::parse_error,
                        "phrase bank line " + std::to_string(line_no) + ": missing id");
        }
        if (!ids.insert(entry.phrase_id).second) {
            throw Error(ErrorCode::duplicate_id, "phrase '" + entry.phrase_id + "': duplicate id");
        }
        if (!known_category(entry.category)) {
            throw Error(ErrorCode::unknown_category, "phrase '" + entry.phrase_id +
                                                         "': unknown category '" + entry.category + "'");
        }
        entry.text_by_lang = localized_or(rec, "text", entry.phrase_id, ErrorCode::missing_variant);
        entry.audio_by_lang = localized_or(rec, "audio", entry.phrase_id, ErrorCode::missing_audio);
        bank.entries.push_back(std::move(entry));
    }
    return bank;
}

PhraseBank load_phrase_bank(const std::string& path) {
    return parse_phrase_bank(text::read_file(path));
}

std::vector<PhraseItem> get_phrases(const PhraseBank& bank, std::string_view category,
                                    std::string_view lang) {
    if (std::find(bank.categories.begin(), bank.categories.end(), category) == bank.categories.end()) {
        throw Error(ErrorCode::unknown_category, "unknown phrase category '" + std::string(category) + "'");
    }
    Language language = parse_language(lang);
    std::vector<PhraseItem> out;
    for (const auto& e : bank.entries) {
        if (e.category != category) continue;
        out.push_back({e.phrase_id, e.text_by_lang.at(language), e.audio_by_lang.at(language)});
    }
    return out;
}

RecordedTranslationProvider RecordedTranslationProvider::from_file(const std::string& path) {
    auto j = nlohmann::json::parse(text::read_file(path));
    return RecordedTranslationProvider(
        j.get<std::map<std::string, std::map<std::string, std::string>>>());
}

RecordedTranslationProvider::RecordedTranslationProvider(
    std::map<std::string, std::map<std::string, std::string>> table)
    : table_(std::move(table)) {}

std::string RecordedTranslationProvider::translate(Language source, std::string_view target,
                                                   std::string_view text) {
    calls_.fetch_add(1);
    if (target != "en") throw Error(ErrorCode::translation_unavailable, "recorded target is en only");
    auto lang = table_.find(std::string(to_string(source)));
    if (lang != table_.end()) {
        auto hit = lang->second.find(std::string(text));
        if (hit != lang->second.end()) return hit->second;
    }
    throw Error(ErrorCode::translation_unavailable, "no recorded translation for this input");
}

void validate(const TranslationRequest& request) {
    if (request.source_lang == Language::en) {
        throw Error(ErrorCode::unsupported_language, "source language must be es, fr or ar");
    }
    if (text::trim(request.text).empty()) {
        throw Error(ErrorCode::validation_error, "text to translate is empty");
    }
    if (text::code_point_count(request.text) > kMaxTranslationChars) {
        throw Error(ErrorCode::over_length, "text exceeds " + std::to_string(kMaxTranslationChars) +
                                                " characters");
    }
}

std::string translate_to_english(TranslationProvider& provider, const TranslationRequest& request) {
    validate(request);
    std::string out;
    try {
        out = provider.translate(request.source_lang, "en", request.text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::translation_unavailable,
                    std::string("translation unavailable: ") + e.what());
    }
    if (text::trim(out).empty()) {
        throw Error(ErrorCode::translation_unavailable, "translation provider returned no text");
    }
    return out;
}

}  // namespace neighbor::translator
