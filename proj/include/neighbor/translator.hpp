#pragma once

#include <array>
#include <atomic>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "neighbor/language.hpp"

namespace neighbor::translator {

/// Phrase categories, in display order.
inline constexpr std::array<std::string_view, 11> kPhraseCategories{
    "Common Words",
    "Words for Healthy and Unhealthy Relationships",
    "Words for Job Search",
    "Words for Emotional Well-Being",
    "Words for a Different Kind of Feeling",
    "Greetings",
    "Introductions",
    "General Questions and Responses",
    "Feeling and Emotional Well-Being",
    "Health and Well-Being",
    "School and Family",
};

struct PhraseEntry {
    std::string phrase_id;
    std::string category;
    LocalizedText text_by_lang;
    LocalizedText audio_by_lang;  // relative asset paths
};

struct PhraseBank {
    std::vector<PhraseEntry> entries;
    std::vector<std::string> categories;
};

struct PhraseItem {
    std::string phrase_id;
    std::string text;
    std::string audio;
};

// JSON lines: {"id", "category", "text": {en,es,fr,ar}, "audio": {en,es,fr,ar}}.
PhraseBank parse_phrase_bank(std::string_view content);
PhraseBank load_phrase_bank(const std::string& path);

std::vector<PhraseItem> get_phrases(const PhraseBank& bank, std::string_view category,
                                    std::string_view lang);

inline constexpr std::size_t kMaxTranslationChars = 2000;

struct TranslationRequest {
    Language source_lang = Language::es;
    std::string text;
};

/// Free-text translation backend; target language is always English.
/// Implementations must be safe for concurrent calls and throw on failure.
class TranslationProvider {
public:
    virtual ~TranslationProvider() = default;
    virtual std::string translate(Language source, std::string_view target,
                                  std::string_view text) = 0;
};

/// Replays translations recorded from the live provider. Unknown inputs fail.
class RecordedTranslationProvider final : public TranslationProvider {
public:
    // {"es": {"hola": "hello"}, "fr": {...}, "ar": {...}}
    static RecordedTranslationProvider from_file(const std::string& path);
    explicit RecordedTranslationProvider(std::map<std::string, std::map<std::string, std::string>> table);

    std::string translate(Language source, std::string_view target, std::string_view text) override;
    std::size_t call_count() const noexcept { return calls_.load(); }

private:
    std::map<std::string, std::map<std::string, std::string>> table_;
    std::atomic<std::size_t> calls_{0};
};

// Throws Error{validation_error | unsupported_language | over_length} before
// touching the provider, Error{translation_unavailable} on provider failure or
// an empty result.
void validate(const TranslationRequest& request);
std::string translate_to_english(TranslationProvider& provider, const TranslationRequest& request);

}  // namespace neighbor::translator
