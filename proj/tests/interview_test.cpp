#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "neighbor/error.hpp"
#include "neighbor/interview.hpp"

using namespace neighbor;
using namespace neighbor::interview;

namespace {

const std::string kBank = std::string(NEIGHBOR_DATA_DIR) + "/interview_questions.jsonl";

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected neighbor::Error";
    return ErrorCode::not_found;
}

Coach coach(std::shared_ptr<ChatProvider> provider = std::make_shared<MockChatProvider>()) {
    return Coach(QuestionBank::load(kBank), std::move(provider), "gpt-4o-realtime");
}

}  // namespace

TEST(QuestionBankTest, ShipsTheFiveQuestions) {
    auto bank = QuestionBank::load(kBank);
    ASSERT_EQ(bank.questions().size(), 5u);
    EXPECT_EQ(bank.find("tell-me-about-yourself").text, "Can you tell me about yourself?");
    EXPECT_EQ(bank.find("handle-pressure").text,
              "How do you handle pressure or stressful situations?");
    EXPECT_EQ(bank.find("salary-expectations").text, "What are your salary expectations?");
    EXPECT_EQ(bank.find("leisure-time").text, "What do you do in your leisure time?");
    EXPECT_EQ(bank.find("independent-or-team").text,
              "Do you prefer working independently or on a team?");
    EXPECT_EQ(code_of([&] { bank.find("unknown-q"); }), ErrorCode::unknown_question);
}

TEST(QuestionBankTest, RejectsDuplicates) {
    EXPECT_EQ(code_of([] {
                  QuestionBank::parse("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n");
              }),
              ErrorCode::duplicate_id);
}

TEST(CoachTest, StartIsActiveWithNoTurns) {
    auto c = coach();
    for (const char* id : {"tell-me-about-yourself", "salary-expectations"}) {
        auto s = c.start(id);
        EXPECT_EQ(s.state, State::active);
        EXPECT_TRUE(s.turns.empty());
        EXPECT_FALSE(s.summary.has_value());
    }
    EXPECT_EQ(code_of([&] { c.start("unknown-q"); }), ErrorCode::unknown_question);
}

TEST(CoachTest, TurnFeedbackCoversThreeDimensions) {
    auto provider = std::make_shared<MockChatProvider>();
    auto c = coach(provider);
    auto s = c.start("handle-pressure");
    auto f = c.submit_turn(s.session_id, "I make a list and take one task at a time.");
    EXPECT_TRUE(f.available);
    EXPECT_FALSE(f.clarity.empty());
    EXPECT_FALSE(f.confidence.empty());
    EXPECT_FALSE(f.completeness.empty());
    EXPECT_EQ(c.session(s.session_id).turns.size(), 1u);

    c.submit_turn(s.session_id, "At the diner we had a rush every Sunday.");
    auto req = provider->last_request();
    ASSERT_TRUE(req.has_value());
    EXPECT_EQ(req->purpose, ChatPurpose::interview_feedback);
    ASSERT_EQ(req->messages.size(), 4u);
    EXPECT_NE(req->messages[0].text.find("How do you handle pressure"), std::string::npos);
    EXPECT_EQ(req->messages[3].text, "At the diner we had a rush every Sunday.");
}

TEST(CoachTest, ProviderFailureStoresTurnWithFeedbackUnavailable) {
    auto provider = std::make_shared<MockChatProvider>();
    provider->set_failing(true);
    auto c = coach(provider);
    auto s = c.start("leisure-time");
    auto f = c.submit_turn(s.session_id, "I play football with my cousins.");
    EXPECT_FALSE(f.available);
    auto after = c.session(s.session_id);
    ASSERT_EQ(after.turns.size(), 1u);
    EXPECT_FALSE(after.turns[0].feedback.available);

    auto summary = c.end(s.session_id);
    EXPECT_EQ(summary_turn_references(summary, 1), 1u);
}

TEST(CoachTest, NoProviderStillRecordsTurns) {
    auto c = coach(nullptr);
    auto s = c.start("leisure-time");
    EXPECT_FALSE(c.submit_turn(s.session_id, "Reading.").available);
    EXPECT_NO_THROW(c.end(s.session_id));
}

TEST(CoachTest, EndLifecycle) {
    auto c = coach();
    auto s = c.start("tell-me-about-yourself");
    EXPECT_EQ(code_of([&] { c.end(s.session_id); }), ErrorCode::no_turns);
    EXPECT_EQ(code_of([&] { c.submit_turn(s.session_id, "   "); }), ErrorCode::empty_transcript);
    for (int i = 0; i < 3; ++i) c.submit_turn(s.session_id, "Answer " + std::to_string(i));
    auto summary = c.end(s.session_id);
    EXPECT_EQ(summary_turn_references(summary, 3), 3u);
    auto ended = c.session(s.session_id);
    EXPECT_EQ(ended.state, State::ended);
    EXPECT_EQ(ended.summary, summary);
    EXPECT_EQ(code_of([&] { c.submit_turn(s.session_id, "more"); }), ErrorCode::session_ended);
    EXPECT_EQ(code_of([&] { c.end(s.session_id); }), ErrorCode::session_ended);
    EXPECT_EQ(c.session(s.session_id).turns.size(), 3u);
    EXPECT_EQ(code_of([&] { c.submit_turn("nope", "x"); }), ErrorCode::unknown_session);
}

TEST(CoachTest, SummaryPromptListsEveryTurn) {
    auto provider = std::make_shared<MockChatProvider>();
    auto c = coach(provider);
    auto s = c.start("independent-or-team");
    c.submit_turn(s.session_id, "Team.");
    c.submit_turn(s.session_id, "Both, depending on the task.");
    c.end(s.session_id);
    auto req = provider->last_request();
    EXPECT_EQ(req->purpose, ChatPurpose::interview_summary);
    EXPECT_NE(req->messages[0].text.find("Turn 2 answer: Both"), std::string::npos);
}

TEST(FeedbackParse, LabelsAndNotes) {
    auto f = parse_turn_feedback(
        "Nice work!\n**Clarity:** Easy to follow.\nKeep that order.\n- Confidence: Calm.\n"
        "Completeness: Add an example.");
    EXPECT_EQ(f.notes, "Nice work!");
    EXPECT_EQ(f.clarity, "Easy to follow. Keep that order.");
    EXPECT_EQ(f.confidence, "Calm.");
    EXPECT_EQ(f.completeness, "Add an example.");
    EXPECT_TRUE(f.available);

    auto loose = parse_turn_feedback("Clarity is good overall.");
    EXPECT_TRUE(loose.clarity.empty());
    EXPECT_EQ(loose.notes, "Clarity is good overall.");
    EXPECT_FALSE(parse_turn_feedback("  \n ").available);
}

TEST(SummaryRefs, CountsDistinctLabelsInRange) {
    EXPECT_EQ(summary_turn_references("Turn 1: a\nTurn 1: b\nTurn 2: c\nTurn 9: d\n", 3), 2u);
    EXPECT_EQ(summary_turn_references("In Turn 1: inline mention", 3), 0u);
}

TEST(CoachTest, RandomActionSequencesKeepInvariants) {
    std::mt19937 rng(101);
    auto provider = std::make_shared<MockChatProvider>();
    auto c = coach(provider);
    const auto& questions = c.bank().questions();
    for (int seq = 0; seq < 300; ++seq) {
        auto s = c.start(questions[rng() % questions.size()].id);
        std::size_t turns = 0;
        bool ended = false;
        for (int step = 0; step < 12; ++step) {
            int action = static_cast<int>(rng() % 5);
            provider->set_failing(rng() % 4 == 0);
            if (action <= 2) {
                bool blank = action == 2 && rng() % 2 == 0;
                try {
                    c.submit_turn(s.session_id, blank ? "  " : "answer");
                    ASSERT_FALSE(ended);
                    ASSERT_FALSE(blank);
                    ++turns;
                } catch (const Error& e) {
                    ASSERT_TRUE(ended || blank);
                    ASSERT_EQ(e.code(), ended ? ErrorCode::session_ended : ErrorCode::empty_transcript);
                }
            } else {
                try {
                    auto summary = c.end(s.session_id);
                    ASSERT_FALSE(ended);
                    ASSERT_GT(turns, 0u);
                    ASSERT_EQ(summary_turn_references(summary, turns), turns);
                    ended = true;
                } catch (const Error& e) {
                    ASSERT_TRUE(ended || turns == 0);
                    ASSERT_EQ(e.code(), ended ? ErrorCode::session_ended : ErrorCode::no_turns);
                }
            }
            auto snap = c.session(s.session_id);
            ASSERT_EQ(snap.turns.size(), turns);
            ASSERT_EQ(snap.state == State::ended, ended);
            ASSERT_EQ(snap.summary.has_value(), ended);
        }
    }
}

TEST(CoachTest, ConcurrentTurnsOnOneSessionAreAllRecorded) {
    auto c = coach();
    auto s = c.start("handle-pressure");
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 10; ++i) c.submit_turn(s.session_id, "answer");
        });
    }
    for (auto& t : threads) t.join();
    EXPECT_EQ(c.session(s.session_id).turns.size(), 80u);
}
