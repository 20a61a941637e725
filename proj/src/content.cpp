#include "neighbor/content.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "neighbor/error.hpp"
#include "neighbor/text.hpp"

namespace neighbor::content {
namespace {

template <std::size_t N>
bool one_of(const std::array<std::string_view, N>& names, std::string_view s) {
    return std::find(names.begin(), names.end(), s) != names.end();
}

std::vector<nlohmann::json> json_lines(std::string_view content, std::string_view what) {
    std::vector<nlohmann::json> out;
    std::size_t line_no = 0;
    for (const auto& line : text::split(content, '\n')) {
        ++line_no;
        auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        try {
            out.push_back(nlohmann::json::parse(trimmed));
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::parse_error, std::string(what) + " line " +
                                                    std::to_string(line_no) + ": " + e.what());
        }
        if (!out.back().is_object()) {
            throw Error(ErrorCode::parse_error,
                        std::string(what) + " line " + std::to_string(line_no) + ": not an object");
        }
    }
    return out;
}

std::string require_id(const nlohmann::json& rec, std::unordered_set<std::string>& seen,
                       std::string_view what) {
    auto id = rec.value("id", "");
    if (id.empty()) throw Error(ErrorCode::parse_error, std::string(what) + " record without id");
    if (!seen.insert(id).second) {
        throw Error(ErrorCode::duplicate_id, std::string(what) + " '" + id + "': duplicate id");
    }
    return id;
}

const nlohmann::json& field(const nlohmann::json& rec, const char* key, const std::string& id) {
    auto it = rec.find(key);
    if (it == rec.end()) {
        throw Error(ErrorCode::missing_variant, "'" + id + "': missing '" + key + "'");
    }
    return *it;
}

}  // namespace

std::string_view to_string(MindfulnessKind kind) noexcept {
    return kind == MindfulnessKind::written_invitation ? "written-invitation" : "embedded-video";
}

std::vector<FaqEntry> parse_faq(std::string_view content) {
    std::vector<FaqEntry> out;
    std::unordered_set<std::string> seen;
    for (const auto& rec : json_lines(content, "faq")) {
        FaqEntry e;
        e.entry_id = require_id(rec, seen, "faq entry");
        e.category = rec.value("category", "");
        if (!one_of(kFaqCategories, e.category)) {
            throw Error(ErrorCode::unknown_category,
                        "faq entry '" + e.entry_id + "': unknown category '" + e.category + "'");
        }
        e.question_by_lang = parse_localized(field(rec, "question", e.entry_id),
                                             "faq entry '" + e.entry_id + "' question");
        e.answer_by_lang = parse_localized(field(rec, "answer", e.entry_id),
                                           "faq entry '" + e.entry_id + "' answer");
        e.provenance = rec.value("provenance", "unspecified");
        out.push_back(std::move(e));
    }
    return out;
}

bool is_valid_url(std::string_view url) {
    std::string_view rest;
    if (url.starts_with("https://")) {
        rest = url.substr(8);
    } else if (url.starts_with("http://")) {
        rest = url.substr(7);
    } else {
        return false;
    }
    auto host = rest.substr(0, rest.find_first_of("/?#"));
    if (host.empty() || host.front() == '.' || host.back() == '.') return false;
    for (char c : host) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                  c == '-' || c == '.' || c == ':';
        if (!ok) return false;
    }
    return std::none_of(url.begin(), url.end(), [](char c) {
        return static_cast<unsigned char>(c) <= 0x20 || c == '"' || c == '<' || c == '>';
    });
}

std::vector<MindfulnessItem> parse_mindfulness(std::string_view content) {
    std::vector<MindfulnessItem> out;
    std::unordered_set<std::string> seen;
    for (const auto& rec : json_lines(content, "mindfulness")) {
        MindfulnessItem item;
        item.item_id = require_id(rec, seen, "mindfulness item");
        item.section = rec.value("section", "");
        if (!one_of(kMindfulnessSections, item.section)) {
            throw Error(ErrorCode::unknown_section, "mindfulness item '" + item.item_id +
                                                        "': unknown section '" + item.section + "'");
        }
        item.title_by_lang = parse_localized(field(rec, "title", item.item_id),
                                             "mindfulness item '" + item.item_id + "' title");
        auto kind = rec.value("kind", "");
        if (kind == "written-invitation") {
            item.kind = MindfulnessKind::written_invitation;
            item.body_by_lang = parse_localized(field(rec, "body", item.item_id),
                                                "mindfulness item '" + item.item_id + "' body");
        } else if (kind == "embedded-video") {
            item.kind = MindfulnessKind::embedded_video;
            item.video_url = rec.value("video_url", "");
            if (!is_valid_url(item.video_url)) {
                throw Error(ErrorCode::invalid_url,
                            "mindfulness item '" + item.item_id + "': invalid video_url");
            }
        } else {
            throw Error(ErrorCode::parse_error,
                        "mindfulness item '" + item.item_id + "': unknown kind '" + kind + "'");
        }
        out.push_back(std::move(item));
    }
    return out;
}

MessageCatalog MessageCatalog::parse(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error, std::string("message catalog: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "message catalog: expected an object");
    MessageCatalog catalog;
    for (const auto& [key, value] : j.items()) {
        catalog.entries_.emplace(key, parse_localized(value, "message '" + key + "'"));
    }
    return catalog;
}

std::string MessageCatalog::lookup(std::string_view key, Language lang) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::string(key);
    auto text = it->second.find(lang);
    if (text != it->second.end()) return text->second;
    return it->second.at(Language::en);
}

bool MessageCatalog::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::string locator_query(std::string_view category, std::string_view url_template) {
    for (const auto& c : kLocatorCategories) {
        if (c.name == category || c.slug == category) {
            std::string query = text::percent_encode(std::string(c.search_phrase) + " near me");
            std::string url(url_template);
            auto pos = url.find("{query}");
            if (pos == std::string::npos) {
                throw Error(ErrorCode::validation_error, "map template lacks {query}");
            }
            url.replace(pos, 7, query);
            return url;
        }
    }
    throw Error(ErrorCode::unknown_category, "unknown locator category '" + std::string(category) + "'");
}

ContentStore::ContentStore(std::vector<FaqEntry> faq, std::vector<MindfulnessItem> mindfulness,
                           MessageCatalog messages)
    : faq_(std::move(faq)), mindfulness_(std::move(mindfulness)), messages_(std::move(messages)) {}

ContentStore ContentStore::load(const std::string& faq_path, const std::string& mindfulness_path,
                                const std::string& messages_path) {
    return ContentStore(parse_faq(text::read_file(faq_path)),
                        parse_mindfulness(text::read_file(mindfulness_path)),
                        MessageCatalog::parse(text::read_file(messages_path)));
}

std::vector<LocalizedFaq> ContentStore::list_faq(std::string_view category,
                                                 std::string_view lang) const {
    if (!one_of(kFaqCategories, category)) {
        throw Error(ErrorCode::unknown_category, "unknown FAQ category '" + std::string(category) + "'");
    }
    Language language = parse_language(lang);
    std::vector<LocalizedFaq> out;
    for (const auto& e : faq_) {
        if (e.category == category) {
            out.push_back({e.entry_id, e.question_by_lang.at(language), e.answer_by_lang.at(language)});
        }
    }
    return out;
}

std::vector<LocalizedMindfulness> ContentStore::list_mindfulness(std::string_view section,
                                                                 std::string_view lang) const {
    if (!one_of(kMindfulnessSections, section)) {
        throw Error(ErrorCode::unknown_section,
                    "unknown mindfulness section '" + std::string(section) + "'");
    }
    Language language = parse_language(lang);
    std::vector<LocalizedMindfulness> out;
    for (const auto& item : mindfulness_) {
        if (item.section != section) continue;
        LocalizedMindfulness m{item.item_id, item.kind, item.title_by_lang.at(language), {}, {}};
        if (item.kind == MindfulnessKind::written_invitation) {
            m.body = item.body_by_lang.at(language);
        } else {
            m.video_url = item.video_url;
        }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace neighbor::content
