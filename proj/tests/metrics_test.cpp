#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <thread>

#include "neighbor/error.hpp"
#include "neighbor/ids.hpp"
#include "neighbor/metrics.hpp"
#include "neighbor/text.hpp"

using namespace neighbor;
using namespace neighbor::metrics;
namespace fs = std::filesystem;

namespace {

const std::string kRulesPath = std::string(NEIGHBOR_DATA_DIR) + "/question_rules.json";
const std::string kReplayPath = std::string(NEIGHBOR_TEST_DIR) + "/data/replay_events.log";
const std::string kLabeledPath = std::string(NEIGHBOR_TEST_DIR) + "/data/labeled_questions.tsv";

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected neighbor::Error";
    return ErrorCode::not_found;
}

UsageEvent event(std::string session, EventKind kind, std::string target) {
    return {std::move(session), kind, std::move(target), Clock::now()};
}

struct TempDir {
    fs::path path = fs::temp_directory_path() / ("neighbor-metrics-" + random_uuid());
    TempDir() { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
};

// Independent of the guard under test.
bool matches_pii_oracle(const std::string& s) {
    static const std::regex ipv4(R"(\b\d{1,3}\.\d{1,3}\.\d{1,3}\.\d{1,3}\b)");
    static const std::regex ipv6(R"([0-9a-fA-F]*:[0-9a-fA-F]*:[0-9a-fA-F:]*)");
    static const std::regex email(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})");
    return std::regex_search(s, ipv4) || std::regex_search(s, ipv6) || std::regex_search(s, email);
}

std::string random_log(std::mt19937& rng, const std::vector<std::string>& sessions, int n) {
    std::string log;
    std::uniform_int_distribution<std::size_t> kind_pick(0, kAllEventKinds.size() - 1);
    std::uniform_int_distribution<std::size_t> session_pick(0, sessions.size() - 1);
    for (int i = 0; i < n; ++i) {
        auto kind = kAllEventKinds[kind_pick(rng)];
        const auto& options = targets(kind);
        std::uniform_int_distribution<std::size_t> target_pick(0, options.size() - 1);
        log += serialize(event(sessions[session_pick(rng)], kind, options[target_pick(rng)])) + "\n";
        if (rng() % 17 == 0) log += "garbage line " + std::to_string(i) + "\n";
    }
    return log;
}

}  // namespace

TEST(SessionIds, FreshAndLogSafe) {
    std::set<std::string> seen;
    for (int i = 0; i < 10000; ++i) {
        auto id = new_session_id();
        ASSERT_EQ(id.find(':'), std::string::npos);
        ASSERT_EQ(id.find_first_of(" \t\r\n"), std::string::npos);
        ASSERT_TRUE(seen.insert(id).second);
    }
}

TEST(Validate, PiiGuardAndSchema) {
    auto sid = new_session_id();
    EXPECT_NO_THROW(validate(event(sid, EventKind::tab_opened, "resume")));
    EXPECT_EQ(code_of([&] { validate(event(sid, EventKind::tab_opened, "192.168.1.5")); }),
              ErrorCode::pii_rejected);
    EXPECT_EQ(code_of([&] { validate(event(sid, EventKind::link_accessed, "me@example.org")); }),
              ErrorCode::pii_rejected);
    EXPECT_EQ(code_of([&] { validate(event(sid, EventKind::link_accessed, "fe80::1")); }),
              ErrorCode::pii_rejected);
    EXPECT_EQ(code_of([&] { validate(event("10.0.0.1", EventKind::tab_opened, "resume")); }),
              ErrorCode::pii_rejected);
    EXPECT_EQ(code_of([&] { validate(event(sid, EventKind::tab_opened, "settings")); }),
              ErrorCode::schema_violation);
    EXPECT_EQ(code_of([&] { validate(event(sid, EventKind::audio_played, "de")); }),
              ErrorCode::schema_violation);
    EXPECT_EQ(code_of([&] { validate(event("has space!", EventKind::tab_opened, "resume")); }),
              ErrorCode::schema_violation);
    EXPECT_EQ(code_of([] { parse_event_kind("keypress"); }), ErrorCode::schema_violation);
    EXPECT_NO_THROW(validate(event(sid, EventKind::career_panel_opened, "american-job-center")));
}

TEST(Validate, JsonIntakeRejectsExtraFields) {
    auto sid = new_session_id();
    nlohmann::json ok{{"session_id", sid}, {"kind", "tab_opened"}, {"target", "locator"}};
    EXPECT_EQ(event_from_json(ok).target, "locator");
    auto with_ip = ok;
    with_ip["ip"] = "1.2.3.4";
    EXPECT_EQ(code_of([&] { event_from_json(with_ip); }), ErrorCode::schema_violation);
    auto device = ok;
    device["device_id"] = "abc";
    EXPECT_EQ(code_of([&] { event_from_json(device); }), ErrorCode::schema_violation);
    auto keypress = ok;
    keypress["kind"] = "keypress";
    EXPECT_EQ(code_of([&] { event_from_json(keypress); }), ErrorCode::schema_violation);
    auto nested = ok;
    nested["target"] = nlohmann::json::object();
    EXPECT_EQ(code_of([&] { event_from_json(nested); }), ErrorCode::schema_violation);
    auto stamped = ok;
    stamped["timestamp_ms"] = 1713171600123;
    EXPECT_EQ(format_timestamp(event_from_json(stamped).timestamp), "20240415T090000.123Z");
}

TEST(Timestamp, RoundTrip) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> ms(0, 4102444800000);
    for (int i = 0; i < 1000; ++i) {
        Clock::time_point t{std::chrono::milliseconds(ms(rng))};
        auto s = format_timestamp(t);
        ASSERT_EQ(s.size(), 20u);
        ASSERT_EQ(parse_timestamp(s), t) << s;
    }
    EXPECT_EQ(code_of([] { parse_timestamp("2024-04-15T09:00:00Z"); }), ErrorCode::parse_error);
}

TEST(EventLog, RecordAppendsDurably) {
    TempDir dir;
    auto path = (dir.path / "events.log").string();
    auto sid = new_session_id();
    {
        EventLog log(path);
        log.record(event(sid, EventKind::tab_opened, "resume"));
        EXPECT_EQ(log.size(), 1u);
        EXPECT_EQ(code_of([&] { log.record(event(sid, EventKind::tab_opened, "192.168.1.5")); }),
                  ErrorCode::pii_rejected);
        EXPECT_EQ(log.size(), 1u);
        // Visible to an independent reader as soon as record() returns.
        auto on_disk = text::read_file(path);
        EXPECT_EQ(std::count(on_disk.begin(), on_disk.end(), '\n'), 1);
        EXPECT_NE(on_disk.find("\ttab_opened\tresume\n"), std::string::npos);
    }
    EventLog reopened(path);
    EXPECT_EQ(reopened.size(), 1u);
    reopened.record(event(sid, EventKind::audio_played, "ar"));
    auto report = reopened.aggregate();
    EXPECT_EQ(report.session_count, 1u);
    EXPECT_EQ(report.audio_play_count, 1u);
    EXPECT_EQ(report.tab_counts.at("resume"), 1u);
}

TEST(EventLog, ConcurrentWritersKeepLinesIntact) {
    TempDir dir;
    EventLog log((dir.path / "events.log").string());
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&log] {
            auto sid = new_session_id();
            for (int i = 0; i < 25; ++i) log.record(event(sid, EventKind::tab_opened, "translator"));
        });
    }
    for (auto& t : threads) t.join();
    auto report = log.aggregate();
    EXPECT_EQ(report.corrupt_lines, 0u);
    EXPECT_EQ(report.session_count, 8u);
    EXPECT_EQ(report.tab_counts.at("translator"), 200u);
}

TEST(Aggregate, EmptyLogIsAllZero) {
    auto r = aggregate("");
    EXPECT_EQ(r, empty_report());
    EXPECT_EQ(r.session_count, 0u);
    for (const auto& [k, v] : r.tab_counts) EXPECT_EQ(v, 0u) << k;
    for (const auto& [k, v] : r.category_counts) EXPECT_EQ(v, 0u) << k;
    EXPECT_EQ(r.tab_counts.size(), 6u);
    EXPECT_EQ(r.category_counts.size(), 6u);
}

TEST(Aggregate, CorruptLinesCountedNotDropped) {
    auto sid = new_session_id();
    std::string log = serialize(event(sid, EventKind::tab_opened, "resume")) + "\n" +
                      "not a record\n" +
                      "20240415T090000.000Z\t" + sid + "\tkeypress\tenter\n" +
                      "20240415T090000.000Z\t" + sid + "\ttab_opened\t192.168.1.5\n" +
                      serialize(event(sid, EventKind::question_submitted, "emotional-support"));
    auto r = aggregate(log);
    EXPECT_EQ(r.event_count, 2u);
    EXPECT_EQ(r.corrupt_lines, 3u);
    EXPECT_EQ(r.corrupt_line_numbers, (std::vector<std::size_t>{2, 3, 4}));
    EXPECT_EQ(r.question_count, 1u);
    EXPECT_EQ(r.to_json()["diagnostics"]["corrupt_lines"], 3);
}

TEST(Aggregate, ReplayMatchesPublishedCounts) {
    auto r = aggregate(text::read_file(kReplayPath));
    EXPECT_EQ(r.corrupt_lines, 0u);
    EXPECT_EQ(r.session_count, 55u);
    EXPECT_EQ(r.question_count, 66u);
    EXPECT_EQ(r.resume_generated_count, 17u);
    EXPECT_EQ(r.american_job_center_count(), 15u);
    EXPECT_EQ(r.audio_play_count, 534u);
    EXPECT_EQ(r.tab_counts.at("resume"), 75u);
    EXPECT_EQ(r.tab_counts.at("career-services"), 62u);
    EXPECT_EQ(r.tab_counts.at("mindfulness"), 61u);
    EXPECT_EQ(r.tab_counts.at("translator"), 54u);
    EXPECT_EQ(r.tab_counts.at("common-questions"), 75u);
    EXPECT_EQ(r.tab_counts.at("locator"), 45u);
    EXPECT_EQ(r.category_counts.at("finding-a-job"), 10u);
    EXPECT_EQ(r.category_counts.at("resume-cv-creation"), 15u);
    EXPECT_EQ(r.category_counts.at("common-question-type"), 13u);
    EXPECT_EQ(r.category_counts.at("preparing-for-an-interview"), 5u);
    EXPECT_EQ(r.category_counts.at("emotional-support"), 3u);
    EXPECT_EQ(r.category_counts.at("questions-asked-in-error"), 20u);
}

TEST(Aggregate, TextExportLayout) {
    auto text = aggregate(text::read_file(kReplayPath)).to_text();
    EXPECT_NE(text.find("Key results"), std::string::npos);
    EXPECT_NE(text.find("Tabs accessed"), std::string::npos);
    EXPECT_NE(text.find("Question types"), std::string::npos);
    std::regex sessions(R"(Number of user sessions\s+55\n)");
    std::regex audio(R"(Audio pronunciation played\s+534\n)");
    std::regex locator(R"(Locator\s+45\n)");
    std::regex errors(R"(Questions asked in error\s+20\n)");
    EXPECT_TRUE(std::regex_search(text, sessions)) << text;
    EXPECT_TRUE(std::regex_search(text, audio));
    EXPECT_TRUE(std::regex_search(text, locator));
    EXPECT_TRUE(std::regex_search(text, errors));
    EXPECT_LT(text.find("Resume "), text.find("Career Services"));
}

TEST(Aggregate, AdditiveOverDisjointSessions) {
    std::mt19937 rng(19);
    for (int round = 0; round < 50; ++round) {
        std::vector<std::string> a_ids, b_ids;
        for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i) a_ids.push_back(new_session_id());
        for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i) b_ids.push_back(new_session_id());
        auto a = random_log(rng, a_ids, static_cast<int>(rng() % 80));
        auto b = random_log(rng, b_ids, static_cast<int>(rng() % 80));
        auto combined = aggregate(a + b);
        auto summed = aggregate(a) + aggregate(b);
        combined.corrupt_line_numbers.clear();
        ASSERT_EQ(combined, summed) << "round " << round;
    }
}

TEST(PiiFirewall, FuzzedEventsNeverStoreAddresses) {
    std::mt19937 rng(23);
    std::vector<std::string> pool{"resume", "10.0.0.", "1", ".", "@", "example", ".org", ":", "fe80",
                                  "::", "a", "-", "career-services", "user", "192.168.", "en", "2001:db8"};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::uniform_int_distribution<std::size_t> kind_pick(0, kAllEventKinds.size() - 1);
    int accepted = 0;
    for (int i = 0; i < 5000; ++i) {
        std::string target;
        for (int k = 1 + static_cast<int>(rng() % 4); k > 0; --k) target += pool[pick(rng)];
        std::string sid = rng() % 5 == 0 ? target + "-session" : new_session_id();
        UsageEvent e = event(sid, kAllEventKinds[kind_pick(rng)], target);
        try {
            validate(e);
        } catch (const Error& err) {
            ASSERT_TRUE(err.code() == ErrorCode::pii_rejected ||
                        err.code() == ErrorCode::schema_violation);
            continue;
        }
        ++accepted;
        ASSERT_FALSE(matches_pii_oracle(serialize(e))) << serialize(e);
    }
    EXPECT_GT(accepted, 0);
}

TEST(Classifier, Examples) {
    auto c = QuestionClassifier::load(kRulesPath);
    EXPECT_EQ(c.classify("How much does a dishwashing job pay?"), QuestionCategory::finding_a_job);
    EXPECT_EQ(c.classify("asdf"), QuestionCategory::asked_in_error);
    EXPECT_EQ(c.classify("help me write my resume objective"), QuestionCategory::resume_cv_creation);
    EXPECT_EQ(c.classify(""), QuestionCategory::asked_in_error);
    EXPECT_EQ(c.classify("What is a job interview like?"),
              QuestionCategory::preparing_for_an_interview);
    EXPECT_EQ(display_name(QuestionCategory::common_question_type), "Common-Question type");
}

TEST(Classifier, LabeledReplayReproducesHistogram) {
    auto c = QuestionClassifier::load(kRulesPath);
    std::map<QuestionCategory, int> histogram;
    int rows = 0;
    for (const auto& line : text::split(text::read_file(kLabeledPath), '\n')) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        ASSERT_NE(tab, std::string::npos) << line;
        auto expected = parse_category(line.substr(0, tab));
        auto question = line.substr(tab + 1);
        auto got = c.classify(question);
        EXPECT_EQ(slug(got), slug(expected)) << question;
        ++histogram[got];
        ++rows;
    }
    EXPECT_EQ(rows, 66);
    EXPECT_EQ(histogram[QuestionCategory::finding_a_job], 10);
    EXPECT_EQ(histogram[QuestionCategory::resume_cv_creation], 15);
    EXPECT_EQ(histogram[QuestionCategory::common_question_type], 13);
    EXPECT_EQ(histogram[QuestionCategory::preparing_for_an_interview], 5);
    EXPECT_EQ(histogram[QuestionCategory::emotional_support], 3);
    EXPECT_EQ(histogram[QuestionCategory::asked_in_error], 20);
}

TEST(Classifier, TotalAndDeterministic) {
    auto c = QuestionClassifier::load(kRulesPath);
    std::mt19937 rng(29);
    std::vector<std::string> pool{"job", "resume", " ", "interview", "?", "é", "ب", "\t", "lonely",
                                  "bus", "x", "cover", "letter", "\xff", "tell me about yourself"};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (int i = 0; i < 3000; ++i) {
        std::string q;
        for (int k = static_cast<int>(rng() % 12); k > 0; --k) q += pool[pick(rng)];
        auto first = c.classify(q);
        ASSERT_EQ(c.classify(q), first);
    }
}

TEST(Classifier, TiesGoToEarlierRule) {
    auto c = QuestionClassifier::parse(R"({"fallback": "questions-asked-in-error", "categories": [
        {"slug": "emotional-support", "keywords": ["alpha"]},
        {"slug": "finding-a-job", "keywords": ["beta", "gamma"]}]})");
    EXPECT_EQ(c.classify("alpha beta"), QuestionCategory::emotional_support);
    EXPECT_EQ(c.classify("alpha beta gamma"), QuestionCategory::finding_a_job);
    EXPECT_EQ(c.classify("delta"), QuestionCategory::asked_in_error);
}

TEST(Classifier, BadRuleFilesRejected) {
    EXPECT_EQ(code_of([] { QuestionClassifier::parse("{"); }), ErrorCode::parse_error);
    EXPECT_EQ(code_of([] {
                  QuestionClassifier::parse(
                      R"({"fallback": "questions-asked-in-error", "categories": [{"slug": "nope", "keywords": []}]})");
              }),
              ErrorCode::parse_error);
    EXPECT_EQ(code_of([] {
                  QuestionClassifier::parse(R"({"fallback": "questions-asked-in-error", "categories": [
                      {"slug": "finding-a-job", "keywords": ["a"]},
                      {"slug": "finding-a-job", "keywords": ["b"]}]})");
              }),
              ErrorCode::duplicate_id);
    EXPECT_EQ(code_of([] {
                  QuestionClassifier::parse(R"({"fallback": "questions-asked-in-error", "categories": [
                      {"slug": "finding-a-job", "keywords": ["?!"]}]})");
              }),
              ErrorCode::empty_field);
}
