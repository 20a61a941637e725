#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace neighbor::qa {

enum class Category { well_being, employment, navigation, family, chicago_services };

std::string_view to_string(Category c) noexcept;

struct QAPair {
    std::string id;
    std::string question;
    std::string answer;  // byte-exact as authored
    Category category = Category::well_being;
    std::string language = "en";
};

/// Curated question-answer reference set. Immutable once loaded.
struct QACorpus {
    std::vector<QAPair> pairs;
    std::string version;
    std::string source_path;
    std::string source_text;  // raw file contents, sent as provider grounding

    const QAPair* find(std::string_view id) const noexcept;
};

inline constexpr double kDefaultMatchThreshold = 0.75;

enum class Verdict { verbatim_hit, miss };

struct MatchResult {
    Verdict verdict = Verdict::miss;
    std::optional<std::string> pair_id;
    double score = 0.0;
};

// One JSON object per line: id, category, language, question, answer. Blank
// lines and lines starting with '#' are ignored; a "#version: X" line sets the
// corpus version. Errors name the offending line.
QACorpus parse_corpus(std::string_view text, std::string source_path = "<memory>");
QACorpus load_corpus(const std::string& path);

// ASCII case-fold, punctuation deleted, whitespace runs collapsed to one space.
std::string normalize(std::string_view text);

std::vector<std::string> token_set(std::string_view text);
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

MatchResult match_query(const QACorpus& corpus, std::string_view query,
                        double threshold = kDefaultMatchThreshold);

// Throws Error{unknown_id}.
const std::string& get_answer(const QACorpus& corpus, std::string_view pair_id);

}  // namespace neighbor::qa
