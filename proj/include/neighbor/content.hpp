#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "neighbor/language.hpp"

namespace neighbor::content {

inline constexpr std::array<std::string_view, 6> kFaqCategories{
    "Finding and Getting a Job", "Relationships", "Well-being", "Getting Adjusted to a New Place",
    "Community Resources",       "FitBit",
};

inline constexpr std::array<std::string_view, 5> kMindfulnessSections{
    "Meditation/Breathing Invitations and Exercises",
    "Wellness",
    "Breathing and Meditation",
    "Connecting with Nature",
    "Education",
};

struct FaqEntry {
    std::string entry_id;
    std::string category;
    LocalizedText question_by_lang;
    LocalizedText answer_by_lang;
    std::string provenance;  // e.g. "human", "machine", "placeholder"
};

struct LocalizedFaq {
    std::string entry_id;
    std::string question;
    std::string answer;
};

enum class MindfulnessKind { written_invitation, embedded_video };

struct MindfulnessItem {
    std::string item_id;
    std::string section;
    MindfulnessKind kind = MindfulnessKind::written_invitation;
    LocalizedText title_by_lang;
    LocalizedText body_by_lang;  // invitations only
    std::string video_url;       // videos only
};

struct LocalizedMindfulness {
    std::string item_id;
    MindfulnessKind kind;
    std::string title;
    std::string body;
    std::string video_url;
};

std::string_view to_string(MindfulnessKind kind) noexcept;

// Content files are JSON lines; every localized field must carry en, es, fr, ar.
std::vector<FaqEntry> parse_faq(std::string_view content);
std::vector<MindfulnessItem> parse_mindfulness(std::string_view content);

bool is_valid_url(std::string_view url);

/// Localized message catalog: key -> text per language.
class MessageCatalog {
public:
    static MessageCatalog parse(std::string_view json_text);

    // Falls back to English, then to the key itself.
    std::string lookup(std::string_view key, Language lang) const;
    bool contains(std::string_view key) const;
    const std::map<std::string, LocalizedText, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, LocalizedText, std::less<>> entries_;
};

struct LocatorCategory {
    std::string_view name;
    std::string_view slug;
    std::string_view search_phrase;
};

inline constexpr std::array<LocatorCategory, 4> kLocatorCategories{{
    {"affordable grocery stores", "affordable-grocery-stores", "affordable grocery store"},
    {"culturally specific grocery stores", "culturally-specific-grocery-stores",
     "culturally specific grocery store"},
    {"farmers markets", "farmers-markets", "farmers market"},
    {"food pantries", "food-pantries", "food pantry"},
}};

inline constexpr std::string_view kDefaultMapEmbedTemplate =
    "https://maps.google.com/maps?output=embed&q={query}";

// Accepts the category name or its slug. The URL's q parameter decodes to
// "<search phrase> near me"; the backend never sees user coordinates.
std::string locator_query(std::string_view category,
                          std::string_view url_template = kDefaultMapEmbedTemplate);

/// All FAQ, mindfulness and message content. Immutable once loaded.
class ContentStore {
public:
    ContentStore(std::vector<FaqEntry> faq, std::vector<MindfulnessItem> mindfulness,
                 MessageCatalog messages);
    static ContentStore load(const std::string& faq_path, const std::string& mindfulness_path,
                             const std::string& messages_path);

    std::vector<LocalizedFaq> list_faq(std::string_view category, std::string_view lang) const;
    std::vector<LocalizedMindfulness> list_mindfulness(std::string_view section,
                                                       std::string_view lang) const;

    const std::vector<FaqEntry>& faq() const { return faq_; }
    const std::vector<MindfulnessItem>& mindfulness() const { return mindfulness_; }
    const MessageCatalog& messages() const { return messages_; }

private:
    std::vector<FaqEntry> faq_;
    std::vector<MindfulnessItem> mindfulness_;
    MessageCatalog messages_;
};

}  // namespace neighbor::content
