#include <gtest/gtest.h>

#include "neighbor/content.hpp"
#include "neighbor/error.hpp"
#include "neighbor/text.hpp"

using namespace neighbor;
using namespace neighbor::content;

namespace {

ContentStore shipped() {
    const std::string dir = NEIGHBOR_DATA_DIR;
    return ContentStore::load(dir + "/faq.jsonl", dir + "/mindfulness.jsonl", dir + "/messages.json");
}

std::string query_param(const std::string& url) {
    auto pos = url.find("q=");
    auto end = url.find('&', pos);
    return text::percent_decode(url.substr(pos + 2, end == std::string::npos ? end : end - pos - 2));
}

}  // namespace

TEST(Faq, CommunityResourcesInEnglish) {
    auto store = shipped();
    auto entries = store.list_faq("Community Resources", "en");
    ASSERT_GE(entries.size(), 1u);
    EXPECT_EQ(entries[0].entry_id, "faq-cr-agencies");
}

TEST(Faq, FitbitInSpanish) {
    auto store = shipped();
    auto entries = store.list_faq("FitBit", "es");
    ASSERT_EQ(entries.size(), 3u);
    EXPECT_EQ(entries[1].question, "¿Cómo cargo mi Fitbit?");
}

TEST(Faq, UnknownCategoryAndLanguage) {
    auto store = shipped();
    try {
        store.list_faq("Weather", "en");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unknown_category);
    }
    try {
        store.list_faq("FitBit", "de");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unsupported_language);
    }
}

TEST(Faq, EveryCategoryHasEntriesAndEveryEntryIsComplete) {
    auto store = shipped();
    for (auto category : kFaqCategories) {
        for (Language lang : kAllLanguages) {
            EXPECT_FALSE(store.list_faq(category, to_string(lang)).empty()) << category;
        }
    }
    for (const auto& e : store.faq()) {
        EXPECT_EQ(e.question_by_lang.size(), 4u);
        EXPECT_EQ(e.answer_by_lang.size(), 4u);
    }
}

TEST(Faq, MissingVariantRejectedAtLoad) {
    auto line = R"({"id":"f1","category":"FitBit","question":{"en":"a","es":"b","fr":"c","ar":"d"},)"
                R"("answer":{"en":"a","es":"b","fr":"c"}})";
    try {
        parse_faq(line);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::missing_variant);
        EXPECT_NE(std::string(e.what()).find("f1"), std::string::npos);
    }
}

TEST(Mindfulness, NatureVideos) {
    auto store = shipped();
    auto items = store.list_mindfulness("Connecting with Nature", "en");
    ASSERT_GE(items.size(), 1u);
    for (const auto& i : items) {
        EXPECT_EQ(i.kind, MindfulnessKind::embedded_video);
        EXPECT_TRUE(is_valid_url(i.video_url));
    }
}

TEST(Mindfulness, FrenchInvitations) {
    auto store = shipped();
    auto items = store.list_mindfulness("Meditation/Breathing Invitations and Exercises", "fr");
    ASSERT_GE(items.size(), 1u);
    EXPECT_EQ(items[0].kind, MindfulnessKind::written_invitation);
    EXPECT_EQ(items[0].body.rfind("Inspirez", 0), 0u);
}

TEST(Mindfulness, UnknownSection) {
    auto store = shipped();
    try {
        store.list_mindfulness("Sleep", "en");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unknown_section);
    }
}

TEST(Mindfulness, VideoNeedsValidUrlInvitationNeedsAllBodies) {
    auto bad_url = R"({"id":"v","section":"Wellness","kind":"embedded-video",)"
                   R"("title":{"en":"a","es":"b","fr":"c","ar":"d"},"video_url":"not a url"})";
    EXPECT_THROW(parse_mindfulness(bad_url), Error);
    auto no_ar = R"({"id":"i","section":"Wellness","kind":"written-invitation",)"
                 R"("title":{"en":"a","es":"b","fr":"c","ar":"d"},"body":{"en":"a","es":"b","fr":"c"}})";
    EXPECT_THROW(parse_mindfulness(no_ar), Error);
}

TEST(Mindfulness, ShippedInvitationsComplete) {
    auto store = shipped();
    for (const auto& item : store.mindfulness()) {
        if (item.kind == MindfulnessKind::written_invitation) EXPECT_EQ(item.body_by_lang.size(), 4u);
    }
}

TEST(Url, Validator) {
    EXPECT_TRUE(is_valid_url("https://www.youtube.com/embed/abc"));
    EXPECT_TRUE(is_valid_url("http://localhost:8080/x?y=1"));
    EXPECT_FALSE(is_valid_url("ftp://x.org"));
    EXPECT_FALSE(is_valid_url("https:///path"));
    EXPECT_FALSE(is_valid_url("https://a b.org"));
}

TEST(Locator, FoodPantry) {
    auto url = locator_query("food pantries");
    EXPECT_EQ(url.rfind("https://maps.google.com/maps?", 0), 0u);
    EXPECT_EQ(query_param(url), "food pantry near me");
}

TEST(Locator, EveryCategoryDecodesToNearMe) {
    for (const auto& c : kLocatorCategories) {
        EXPECT_EQ(query_param(locator_query(c.slug)), std::string(c.search_phrase) + " near me");
        EXPECT_EQ(locator_query(c.name), locator_query(c.slug));
    }
    EXPECT_EQ(query_param(locator_query("farmers markets")), "farmers market near me");
}

TEST(Locator, CustomTemplateAndUnknownCategory) {
    auto url = locator_query("food-pantries", "https://maps.example/embed?key=k&q={query}&z=12");
    EXPECT_EQ(url, "https://maps.example/embed?key=k&q=food%20pantry%20near%20me&z=12");
    try {
        locator_query("bowling alleys");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unknown_category);
    }
}

TEST(Messages, CatalogLookupAndFallbacks) {
    auto store = shipped();
    const auto& m = store.messages();
    EXPECT_EQ(m.lookup("error.not_found", Language::fr), "Nous n'avons pas trouvé ce que vous cherchez.");
    EXPECT_EQ(m.lookup("no.such.key", Language::ar), "no.such.key");
    for (const auto& [key, texts] : m.entries()) EXPECT_EQ(texts.size(), 4u) << key;
}
