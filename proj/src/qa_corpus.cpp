#include "neighbor/qa_corpus.hpp"

#include <algorithm>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "neighbor/error.hpp"
#include "neighbor/text.hpp"

namespace neighbor::qa {
namespace {

Category parse_category(std::string_view s, std::size_t line_no) {
    if (s == "well-being") return Category::well_being;
    if (s == "employment") return Category::employment;
    if (s == "navigation") return Category::navigation;
    if (s == "family") return Category::family;
    if (s == "chicago-services") return Category::chicago_services;
    throw Error(ErrorCode::parse_error, "corpus line " + std::to_string(line_no) +
                                            ": unknown category '" + std::string(s) + "'");
}

std::string required_string(const nlohmann::json& rec, const char* key, std::size_t line_no) {
    auto it = rec.find(key);
    if (it == rec.end() || !it->is_string()) {
        throw Error(ErrorCode::parse_error, "corpus line " + std::to_string(line_no) +
                                                ": missing string field '" + key + "'");
    }
    return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Category c) noexcept {
    switch (c) {
        case Category::well_being: return "well-being";
        case Category::employment: return "employment";
        case Category::navigation: return "navigation";
        case Category::family: return "family";
        case Category::chicago_services: return "chicago-services";
    }
    return "well-being";
}

const QAPair* QACorpus::find(std::string_view id) const noexcept {
    for (const auto& p : pairs) {
        if (p.id == id) return &p;
    }
    return nullptr;
}

QACorpus parse_corpus(std::string_view text, std::string source_path) {
    QACorpus corpus;
    corpus.source_path = std::move(source_path);
    corpus.source_text = std::string(text);

    std::unordered_set<std::string> seen;
    std::size_t line_no = 0;
    for (const auto& raw : text::split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        if (line.front() == '#') {
            constexpr std::string_view kVersion = "#version:";
            if (line.substr(0, kVersion.size()) == kVersion) {
                corpus.version = text::trim(line.substr(kVersion.size()));
            }
            continue;
        }

        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::parse_error,
                        "corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!rec.is_object()) {
            throw Error(ErrorCode::parse_error,
                        "corpus line " + std::to_string(line_no) + ": expected an object");
        }

        QAPair pair;
        pair.id = required_string(rec, "id", line_no);
        pair.question = required_string(rec, "question", line_no);
        pair.answer = required_string(rec, "answer", line_no);
        pair.category = parse_category(required_string(rec, "category", line_no), line_no);
        if (auto it = rec.find("language"); it != rec.end() && it->is_string()) {
            pair.language = it->get<std::string>();
        }

        if (pair.id.empty()) {
            throw Error(ErrorCode::empty_field,
                        "corpus line " + std::to_string(line_no) + ": empty id");
        }
        if (text::trim(pair.question).empty()) {
            throw Error(ErrorCode::empty_field, "corpus record '" + pair.id + "': empty question");
        }
        if (text::trim(pair.answer).empty()) {
            throw Error(ErrorCode::empty_field, "corpus record '" + pair.id + "': empty answer");
        }
        if (!seen.insert(pair.id).second) {
            throw Error(ErrorCode::duplicate_id, "corpus record '" + pair.id + "' (line " +
                                                     std::to_string(line_no) + "): duplicate id");
        }
        corpus.pairs.push_back(std::move(pair));
    }

    if (corpus.pairs.empty()) {
        throw Error(ErrorCode::parse_error, "corpus '" + corpus.source_path + "' has no records");
    }
    return corpus;
}

QACorpus load_corpus(const std::string& path) { return parse_corpus(text::read_file(path), path); }

std::string normalize(std::string_view input) {
    std::string out;
    out.reserve(input.size());
    bool pending_space = false;
    for (char32_t cp : text::decode_utf8(input)) {
        if (text::is_space(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (text::is_punctuation(cp)) continue;
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        if (cp >= U'A' && cp <= U'Z') cp = cp - U'A' + U'a';
        text::append_utf8(out, cp);
    }
    return out;
}

std::vector<std::string> token_set(std::string_view input) {
    auto normalized = normalize(input);
    std::vector<std::string> tokens;
    if (!normalized.empty()) tokens = text::split(normalized, ' ');
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    auto union_size = a.size() + b.size() - common.size();
    return static_cast<double>(common.size()) / static_cast<double>(union_size);
}

MatchResult match_query(const QACorpus& corpus, std::string_view query, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::validation_error, "match threshold must lie in [0, 1]");
    }
    MatchResult result;
    auto query_tokens = token_set(query);
    if (query_tokens.empty()) return result;

    const QAPair* best = nullptr;
    double best_score = -1.0;
    for (const auto& pair : corpus.pairs) {
        double score = jaccard(query_tokens, token_set(pair.question));
        if (score > best_score) {  // strict: earlier index wins ties
            best_score = score;
            best = &pair;
        }
    }
    if (best == nullptr) return result;
    result.score = best_score;
    if (best_score >= threshold) {
        result.verdict = Verdict::verbatim_hit;
        result.pair_id = best->id;
    }
    return result;
}

const std::string& get_answer(const QACorpus& corpus, std::string_view pair_id) {
    if (const auto* pair = corpus.find(pair_id)) return pair->answer;
    throw Error(ErrorCode::unknown_id, "no corpus record with id '" + std::string(pair_id) + "'");
}

}  // namespace neighbor::qa
