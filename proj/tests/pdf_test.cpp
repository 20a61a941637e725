#include <gtest/gtest.h>

#include <random>

#include "neighbor/error.hpp"
#include "neighbor/pdf.hpp"
#include "neighbor/text.hpp"

using namespace neighbor;

namespace {

const std::string kFixtures = std::string(NEIGHBOR_TEST_DIR) + "/fixtures/resume";

std::string fixture(const std::string& name) { return text::read_file(kFixtures + "/" + name); }

std::string collapse(std::string_view s) {
    std::string out;
    for (char c : s) {
        bool ws = c == ' ' || c == '\n' || c == '\t' || c == '\r';
        if (ws) {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += c;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

}  // namespace

TEST(PdfExtract, SimpleFontWithEscapes) {
    EXPECT_EQ(pdf::extract_text(fixture("simple_font.pdf")),
              "Hello (world) \\ café\nSecond “line” — done");
}

TEST(PdfExtract, ObjectStreamsFlateAndCmapRanges) {
    EXPECT_EQ(pdf::extract_text(fixture("objstm_cmap.pdf")), "Kerned\nCafé naïve résumé\nABC");
    EXPECT_EQ(pdf::page_count(fixture("objstm_cmap.pdf")), 1u);
}

TEST(PdfExtract, ImageOnlyPageHasNoText) {
    EXPECT_EQ(pdf::extract_text(fixture("image_only.pdf")), "");
}

TEST(PdfExtract, DamagedInputIsUnreadable) {
    for (const char* name : {"truncated.pdf", "not_a_pdf.pdf"}) {
        try {
            pdf::extract_text(fixture(name));
            ADD_FAILURE() << name;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::unreadable_pdf) << name;
        }
    }
    EXPECT_THROW(pdf::extract_text(""), Error);
}

TEST(PdfWriter, ShortDocumentIsOnePage) {
    auto bytes = pdf::write_text_document({{"Amina Yusuf", 20, true, 0}});
    EXPECT_EQ(bytes.rfind("%PDF-", 0), 0u);
    EXPECT_EQ(pdf::page_count(bytes), 1u);
    EXPECT_EQ(pdf::extract_text(bytes), "Amina Yusuf");
}

TEST(PdfWriter, LongDocumentPaginatesAndWraps) {
    std::vector<pdf::TextLine> lines;
    std::string long_line;
    for (int i = 0; i < 60; ++i) long_line += "word" + std::to_string(i) + " ";
    for (int i = 0; i < 80; ++i) lines.push_back({"line " + std::to_string(i), 10, false, 0});
    lines.push_back({long_line, 10, false, 0});
    auto bytes = pdf::write_text_document(lines);
    EXPECT_GT(pdf::page_count(bytes), 1u);
    auto text = collapse(pdf::extract_text(bytes));
    EXPECT_NE(text.find("line 0 line 1"), std::string::npos);
    EXPECT_NE(text.find(collapse(long_line)), std::string::npos);
}

TEST(PdfWriter, RandomUnicodeSurvivesRoundTrip) {
    std::mt19937 rng(3);
    const std::vector<std::string> pieces = {"a", "Z", "7", " ", "(", ")", "\\", "é", "ñ", "ç",
                                             "م", "ر", "ح", "—", "“", "€", "日", "😀", "%", "<"};
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::uniform_int_distribution<int> len(1, 120);
    for (int doc = 0; doc < 20; ++doc) {
        std::vector<pdf::TextLine> lines;
        for (int i = 0; i < 12; ++i) {
            std::string s;
            for (int k = len(rng); k > 0; --k) s += pieces[pick(rng)];
            lines.push_back({s, i == 0 ? 18.0 : 10.0, i == 0, 0});
        }
        auto text = collapse(pdf::extract_text(pdf::write_text_document(lines)));
        for (const auto& l : lines) {
            auto want = collapse(l.text);
            if (!want.empty()) ASSERT_NE(text.find(want), std::string::npos) << want;
        }
    }
}
