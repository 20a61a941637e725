#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "neighbor/chat_provider.hpp"

namespace neighbor::interview {

struct Question {
    std::string id;
    std::string text;
};

class QuestionBank {
public:
    // JSON lines with id and text; '#' lines skipped.
    static QuestionBank parse(std::string_view jsonl);
    static QuestionBank load(const std::string& path);

    // Throws Error{unknown_question}.
    const Question& find(std::string_view id) const;
    const std::vector<Question>& questions() const { return questions_; }

private:
    std::vector<Question> questions_;
};

struct TurnFeedback {
    bool available = false;
    std::string clarity;
    std::string confidence;
    std::string completeness;
    std::string notes;  // reply text that did not fit the three labels
};

// Reads "Clarity:", "Confidence:" and "Completeness:" lines. Anything else is
// kept in notes.
TurnFeedback parse_turn_feedback(std::string_view reply);

using Clock = std::chrono::system_clock;

struct Turn {
    std::string transcript;
    TurnFeedback feedback;
    Clock::time_point at;
};

enum class State { active, ended };

std::string_view to_string(State s) noexcept;

struct Session {
    std::string session_id;
    Question question;
    std::vector<Turn> turns;
    State state = State::active;
    std::optional<std::string> summary;

    nlohmann::json to_json() const;
};

// Distinct "Turn N:" labels at line starts, N in 1..max_turn.
std::size_t summary_turn_references(std::string_view summary, std::size_t max_turn);

std::string_view feedback_instructions();
std::string_view summary_instructions();

/// Practice sessions on a fixed question. Each session moves from active to
/// ended exactly once; ended sessions reject every change. Calls on one
/// session are serialized, separate sessions run in parallel.
class Coach {
public:
    // `provider` may be null: turns are stored with feedback unavailable.
    Coach(QuestionBank bank, std::shared_ptr<ChatProvider> provider, std::string model_id);

    Session start(std::string_view question_id);

    // Errors: unknown_session, empty_transcript, session_ended. A provider
    // failure still records the turn, with feedback marked unavailable.
    TurnFeedback submit_turn(std::string_view session_id, std::string_view transcript);

    // Errors: unknown_session, no_turns, session_ended.
    std::string end(std::string_view session_id);

    Session session(std::string_view session_id) const;
    const QuestionBank& bank() const noexcept { return bank_; }

private:
    struct Slot {
        std::mutex mu;
        Session session;
    };
    std::shared_ptr<Slot> slot(std::string_view id) const;

    QuestionBank bank_;
    std::shared_ptr<ChatProvider> provider_;
    std::string model_id_;
    mutable std::shared_mutex mu_;
    std::map<std::string, std::shared_ptr<Slot>, std::less<>> sessions_;
};

}  // namespace neighbor::interview
