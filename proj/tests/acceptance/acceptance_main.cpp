// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "neighbor/assistant.hpp"
#include "neighbor/career.hpp"
#include "neighbor/content.hpp"
#include "neighbor/error.hpp"
#include "neighbor/ids.hpp"
#include "neighbor/interview.hpp"
#include "neighbor/metrics.hpp"
#include "neighbor/pdf.hpp"
#include "neighbor/qa_corpus.hpp"
#include "neighbor/resume.hpp"
#include "neighbor/text.hpp"
#include "neighbor/translator.hpp"
#include "support/random_resume.hpp"
#include "support/running_service.hpp"

namespace fs = std::filesystem;
using namespace neighbor;
using nlohmann::json;
using Ms = std::chrono::milliseconds;

namespace {

const std::string kData = NEIGHBOR_DATA_DIR;
const std::string kTests = NEIGHBOR_TEST_DIR;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void check(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (failures.size() < 8) failures.push_back(what);
    }
};

std::shared_ptr<const qa::QACorpus> corpus() {
    static auto c = std::make_shared<const qa::QACorpus>(qa::load_corpus(kData + "/qa_corpus.jsonl"));
    return c;
}

template <class Fn>
std::optional<ErrorCode> error_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

// ---- 1 ---------------------------------------------------------------------

Outcome verbatim_retrieval() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    auto provider = std::make_shared<MockChatProvider>();
    Assistant assistant(corpus(), provider);
    for (const auto& pair : corpus()->pairs) {
        auto s = assistant.create_session("en");
        auto reply = assistant.handle_message(s.session_id, pair.question);
        o.check(reply.text == pair.answer, pair.id + ": reply bytes differ");
        o.check(reply.source == ReplySource::corpus_verbatim, pair.id + ": source not corpus-verbatim");
        o.check(reply.matched_pair == pair.id, pair.id + ": wrong pair matched");
    }
    auto elapsed = std::chrono::duration_cast<Ms>(std::chrono::steady_clock::now() - start);
    o.check(corpus()->pairs.size() == 20, "corpus does not hold 20 pairs");
    o.check(provider->call_count() == 0, "provider was called");
    o.check(elapsed < std::chrono::seconds(5), "runtime over 5 s");
    o.detail = std::to_string(corpus()->pairs.size()) + " questions, " +
               std::to_string(provider->call_count()) + " provider calls";
    return o;
}

// ---- 2 ---------------------------------------------------------------------

Outcome dispatch_routing() {
    Outcome o;
    auto provider = std::make_shared<MockChatProvider>();
    Assistant assistant(corpus(), provider);
    int cases = 0, hits = 0, misses = 0;
    for (const auto& line : text::split(text::read_file(kTests + "/data/dispatch_cases.tsv"), '\n')) {
        if (line.empty() || line[0] == '#') continue;
        auto f = text::split(line, '\t');
        if (f.size() != 4) {
            o.check(false, "malformed case line: " + line);
            continue;
        }
        ++cases;
        const auto& query = f[0];
        bool expect_hit = f[1] != "-";
        double golden = std::stod(f[2]) / std::stod(f[3]);

        auto match = qa::match_query(*corpus(), query, 0.75);
        o.check(std::abs(match.score - golden) < 1e-12, "score mismatch: " + query);

        auto before = provider->call_count();
        auto s = assistant.create_session("en");
        auto reply = assistant.handle_message(s.session_id, query);
        auto calls = provider->call_count() - before;
        if (expect_hit) {
            ++hits;
            o.check(reply.source == ReplySource::corpus_verbatim && reply.matched_pair == f[1],
                    "expected hit on " + f[1] + ": " + query);
            o.check(calls == 0, "provider called on hit: " + query);
        } else {
            ++misses;
            o.check(reply.source == ReplySource::generated, "expected generated reply: " + query);
            o.check(calls == 1, "miss did not make exactly one provider call: " + query);
        }
    }
    o.check(cases == 50, "expected 50 cases, found " + std::to_string(cases));
    o.detail = std::to_string(cases) + " cases (" + std::to_string(hits) + " hits, " +
               std::to_string(misses) + " misses)";
    return o;
}

// ---- 3 ---------------------------------------------------------------------

Outcome metrics_replay() {
    Outcome o;
    auto start = std::chrono::steady_clock::now();
    auto r = metrics::aggregate(text::read_file(kTests + "/data/replay_events.log"));
    auto eq = [&o](std::size_t got, std::size_t want, const std::string& what) {
        o.check(got == want, what + " = " + std::to_string(got) + ", want " + std::to_string(want));
    };
    eq(r.session_count, 55, "sessions");
    eq(r.question_count, 66, "questions");
    eq(r.resume_generated_count, 17, "resumes");
    eq(r.american_job_center_count(), 15, "american job center");
    eq(r.audio_play_count, 534, "audio plays");
    eq(r.corrupt_lines, 0, "corrupt lines");
    const std::vector<std::pair<std::string, std::size_t>> tabs{
        {"resume", 75}, {"career-services", 62}, {"mindfulness", 61},
        {"translator", 54}, {"common-questions", 75}, {"locator", 45}};
    for (const auto& [tab, want] : tabs) eq(r.tab_counts.at(tab), want, "tab " + tab);

    auto classifier = metrics::QuestionClassifier::load(kData + "/question_rules.json");
    std::map<std::string, std::size_t> histogram;
    for (const auto& line : text::split(text::read_file(kTests + "/data/labeled_questions.tsv"), '\n')) {
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        ++histogram[std::string(metrics::slug(classifier.classify(line.substr(tab + 1))))];
    }
    const std::vector<std::pair<std::string, std::size_t>> fig{
        {"finding-a-job", 10},        {"resume-cv-creation", 15}, {"common-question-type", 13},
        {"preparing-for-an-interview", 5}, {"emotional-support", 3}, {"questions-asked-in-error", 20}};
    for (const auto& [cat, want] : fig) eq(histogram[cat], want, "category " + cat);

    auto elapsed = std::chrono::duration_cast<Ms>(std::chrono::steady_clock::now() - start);
    o.check(elapsed < std::chrono::seconds(1), "runtime over 1 s");
    o.detail = "55/66/17/15/534, tabs 75/62/61/54/75/45, questions 10/15/13/5/3/20";
    return o;
}

// ---- 4 ---------------------------------------------------------------------

Outcome resume_round_trip() {
    Outcome o;
    resume::ProcessEngineConfig config;
    config.command = {NEIGHBOR_STUB_RENDER, "{input}", "{output_dir}"};
    config.max_concurrent = 4;
    resume::ProcessRenderEngine engine(config);
    std::mt19937 rng(4242);
    std::size_t strings = 0;
    auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 25; ++i) {
        auto input = fixtures::random_resume(rng);
        auto yaml_a = resume::map_to_render_schema(input).to_yaml();
        auto yaml_b = resume::map_to_render_schema(input).to_yaml();
        o.check(yaml_a == yaml_b, "serialization not deterministic for fixture " + std::to_string(i));
        auto pdf = resume::build_resume(input, engine);
        auto missing = fixtures::missing_strings(input, pdf::extract_text(pdf));
        strings += resume::input_strings(input).size();
        for (const auto& m : missing) o.check(false, "fixture " + std::to_string(i) + " lost '" + m + "'");
    }
    auto elapsed = std::chrono::duration_cast<Ms>(std::chrono::steady_clock::now() - start);
    o.check(elapsed < std::chrono::seconds(5), "stub runtime over 5 s");
    o.detail = "25 fixtures, " + std::to_string(strings) + " strings, stub engine " +
               std::to_string(elapsed.count()) + " ms";
    return o;
}

// ---- 5 ---------------------------------------------------------------------

class CountingClient final : public career::CareerDataClient {
public:
    explicit CountingClient(std::string dir) : inner_(std::move(dir)) {}
    career::HttpResult get(const career::RequestDescriptor& r) override {
        ++calls;
        return inner_.get(r);
    }
    std::size_t calls = 0;

private:
    career::FixtureCareerClient inner_;
};

Outcome career_contract() {
    using career::Param;
    Outcome o;
    CountingClient client(kData + "/fixtures/career");
    career::CareerCache cache;
    int subsets = 0;
    for (const auto& k : career::query_kinds()) {
        std::string slug(k.slug);
        auto golden = json::parse(text::read_file(kTests + "/golden/career/" + slug + ".json"));
        auto fields = golden["params"].get<std::map<std::string, std::string>>();
        auto params = career::params_from_fields(k.kind, fields, nullptr);
        auto descriptor = career::build_request(k.kind, params).to_json();
        o.check(json::parse(descriptor.dump()) == golden["descriptor"], slug + ": descriptor differs from golden");

        auto n = k.signature.size();
        for (unsigned mask = 0; mask + 1 < (1u << n); ++mask) {
            auto p = params;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1u << i)) continue;
                switch (k.signature[i]) {
                    case Param::occupation: p.occupation.reset(); break;
                    case Param::second_occupation: p.second_occupation.reset(); break;
                    case Param::state: p.state.reset(); break;
                    case Param::scope: p.scope.reset(); break;
                    case Param::location: p.location.reset(); break;
                    case Param::radius: p.radius_miles.reset(); break;
                }
            }
            ++subsets;
            o.check(error_of([&] { career::build_request(k.kind, p); }) == ErrorCode::missing_parameter,
                    slug + ": subset " + std::to_string(mask) + " accepted");
        }

        auto before = client.calls;
        auto dataset = career::fetch(k.kind, params, client, cache);
        o.check(client.calls == before + 1, slug + ": first fetch did not reach the client once");
        o.check(!dataset.columns.empty() && !dataset.rows.empty(), slug + ": empty dataset");
        for (const auto& row : dataset.rows) {
            o.check(row.size() == dataset.columns.size(), slug + ": ragged row");
        }
        auto again = career::fetch(k.kind, params, client, cache);
        o.check(client.calls == before + 1, slug + ": repeat reached upstream");
        o.check(again.rows == dataset.rows, slug + ": cached rows differ");
    }
    o.detail = "14 kinds, " + std::to_string(subsets) + " strict subsets rejected, " +
               std::to_string(client.calls) + " upstream calls for 28 fetches";
    return o;
}

// ---- 6 ---------------------------------------------------------------------

Outcome interview_state_machine() {
    using namespace interview;
    Outcome o;
    auto provider = std::make_shared<MockChatProvider>();
    Coach coach(QuestionBank::load(kData + "/interview_questions.jsonl"), provider, "gpt-4o-realtime");
    const auto& questions = coach.bank().questions();
    std::mt19937 rng(6006);
    std::size_t violations = 0, actions = 0;
    auto violate = [&](bool ok, const std::string& what) {
        if (ok) return;
        ++violations;
        o.check(false, what);
    };
    for (int seq = 0; seq < 1000; ++seq) {
        auto s = coach.start(questions[rng() % questions.size()].id);
        std::size_t turns = 0;
        bool ended = false;
        int steps = 1 + static_cast<int>(rng() % 14);
        for (int step = 0; step < steps; ++step, ++actions) {
            provider->set_failing(rng() % 5 == 0);
            int action = static_cast<int>(rng() % 6);
            if (action <= 3) {
                bool blank = action == 3;
                auto err = error_of([&] { coach.submit_turn(s.session_id, blank ? " \t" : "my answer"); });
                if (ended) {
                    violate(err == ErrorCode::session_ended, "turn accepted after end");
                } else if (blank) {
                    violate(err == ErrorCode::empty_transcript, "blank transcript accepted");
                } else {
                    violate(!err.has_value(), "valid turn rejected");
                    if (!err) ++turns;
                }
            } else {
                std::string summary;
                auto err = error_of([&] { summary = coach.end(s.session_id); });
                if (ended) {
                    violate(err == ErrorCode::session_ended, "second end accepted");
                } else if (turns == 0) {
                    violate(err == ErrorCode::no_turns, "end accepted with zero turns");
                } else {
                    violate(!err.has_value(), "end rejected");
                    violate(summary_turn_references(summary, turns) == turns, "summary turn count differs");
                    ended = true;
                }
            }
            auto snap = coach.session(s.session_id);
            violate(snap.turns.size() == turns, "turn count drifted");
            violate((snap.state == State::ended) == ended, "state drifted");
            violate(snap.summary.has_value() == ended, "summary presence drifted");
            for (std::size_t i = 1; i < snap.turns.size(); ++i) {
                violate(snap.turns[i - 1].at <= snap.turns[i].at, "turns out of order");
            }
            if (ended) {
                violate(error_of([&] { coach.submit_turn(s.session_id, "late"); }) == ErrorCode::session_ended,
                        "ended session mutated");
            }
        }
    }
    o.detail = "1000 sequences, " + std::to_string(actions) + " actions, " + std::to_string(violations) +
               " violations";
    return o;
}

// ---- 7 ---------------------------------------------------------------------

bool leaks_pii(const std::string& s) {
    static const std::regex ipv4(R"((\d{1,3}\.){3}\d{1,3})");
    static const std::regex ipv6(R"([0-9A-Fa-f]{0,4}:[0-9A-Fa-f]{0,4}:[0-9A-Fa-f:]*)");
    static const std::regex email(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})");
    return std::regex_search(s, ipv4) || std::regex_search(s, ipv6) || std::regex_search(s, email);
}

Outcome privacy_firewall() {
    Outcome o;
    fs::path dir = fs::temp_directory_path() / ("neighbor-acceptance-" + random_uuid());
    fs::create_directories(dir);
    auto log_path = (dir / "events.log").string();
    std::size_t accepted = 0, rejected = 0, violations_offered = 0;
    {
        metrics::EventLog log(log_path);
        std::mt19937 rng(7007);
        auto pick = [&rng](const auto& v) { return v[rng() % v.size()]; };
        const std::vector<std::string> pii{"192.168.1.5", "10.0.0.1", "fe80::1", "2001:db8::ff00:42:8329",
                                           "amina@example.org", "a.b+c@mail.co", "::1", "8.8.8.8"};
        const std::vector<std::string> junk{"keypress", "", "settings", "RESUME", "resume ", "x", "\t",
                                            "career panel", "audio/en/yes.mp3", "{}", "null"};
        const std::vector<std::string> extras{"ip", "ip_address", "device_id", "user_agent", "email",
                                              "name", "location", "free_text"};
        for (int i = 0; i < 10000; ++i) {
            auto kind = metrics::kAllEventKinds[rng() % metrics::kAllEventKinds.size()];
            json payload{{"session_id", metrics::new_session_id()},
                         {"kind", metrics::to_string(kind)},
                         {"target", pick(metrics::targets(kind))}};
            bool violating = false;
            switch (rng() % 8) {
                case 0:  // address in the target
                    payload["target"] = rng() % 2 ? pick(pii) : pick(metrics::targets(kind)) + " " + pick(pii);
                    violating = true;
                    break;
                case 1:  // address as the session id
                    payload["session_id"] = pick(pii);
                    violating = true;
                    break;
                case 2:  // forbidden extra field
                    payload[pick(extras)] = rng() % 2 ? json(pick(pii)) : json("value");
                    violating = true;
                    break;
                case 3:  // unknown kind or target
                    if (rng() % 2) {
                        payload["kind"] = pick(junk);
                    } else {
                        payload["target"] = pick(junk);
                    }
                    violating = true;
                    break;
                case 4:  // wrong shape
                    if (rng() % 2) {
                        payload.erase(rng() % 2 ? "target" : "session_id");
                    } else {
                        payload["target"] = json::array({"resume"});
                    }
                    violating = true;
                    break;
                default:
                    if (rng() % 3 == 0) payload["timestamp_ms"] = 1713171600000 + (rng() % 1000000);
                    break;
            }
            if (violating) ++violations_offered;
            bool ok = true;
            try {
                log.record(metrics::event_from_json(payload));
            } catch (const Error& e) {
                ok = false;
                o.check(e.code() == ErrorCode::schema_violation || e.code() == ErrorCode::pii_rejected,
                        "unexpected error code for " + payload.dump());
            }
            if (ok) {
                ++accepted;
                o.check(!violating, "violating payload accepted: " + payload.dump());
            } else {
                ++rejected;
                o.check(violating, "valid payload rejected: " + payload.dump());
            }
        }
    }
    std::size_t stored = 0, leaks = 0;
    for (const auto& line : text::split(text::read_file(log_path), '\n')) {
        if (line.empty()) continue;
        ++stored;
        if (leaks_pii(line)) {
            ++leaks;
            o.check(false, "stored record matches an address pattern: " + line);
        }
    }
    o.check(stored == accepted, "stored line count differs from accepted count");
    fs::remove_all(dir);
    o.detail = "10000 payloads, " + std::to_string(violations_offered) + " violating, " +
               std::to_string(rejected) + " rejected, " + std::to_string(stored) + " stored, " +
               std::to_string(leaks) + " leaks";
    return o;
}

// ---- 8 ---------------------------------------------------------------------

Outcome content_completeness() {
    Outcome o;
    auto bank = translator::load_phrase_bank(kData + "/phrase_bank.jsonl");
    for (const auto& e : bank.entries) {
        for (Language l : kAllLanguages) {
            auto has = [l](const LocalizedText& t) { return t.contains(l) && !t.at(l).empty(); };
            o.check(has(e.text_by_lang), e.phrase_id + ": missing text");
            o.check(has(e.audio_by_lang), e.phrase_id + ": missing audio");
        }
    }
    auto store = content::ContentStore::load(kData + "/faq.jsonl", kData + "/mindfulness.jsonl",
                                             kData + "/messages.json");
    std::size_t invitations = 0;
    for (const auto& f : store.faq()) {
        for (Language l : kAllLanguages) {
            o.check(f.question_by_lang.contains(l) && f.answer_by_lang.contains(l), f.entry_id + ": missing variant");
        }
    }
    for (const auto& m : store.mindfulness()) {
        if (m.kind != content::MindfulnessKind::written_invitation) continue;
        ++invitations;
        for (Language l : kAllLanguages) {
            o.check(m.title_by_lang.contains(l) && m.body_by_lang.contains(l), m.item_id + ": missing variant");
        }
    }

    fixtures::RunningService running;
    auto cli = running.client();
    int endpoints = 0;
    auto expect = [&](const httplib::Result& res, int status, const std::string& what) {
        ++endpoints;
        o.check(res && res->status == status,
                what + " -> " + (res ? std::to_string(res->status) + " " + res->body.substr(0, 120) : "no response"));
        return res ? res->body : std::string();
    };
    auto q = [](const httplib::Params& p) { return httplib::detail::params_to_query_str(p); };
    const std::string js = "application/json";

    expect(cli.Get("/healthz"), 200, "GET /healthz");
    auto sid = json::parse(expect(cli.Post("/api/chat/session", R"({"lang":"fr"})", js), 201, "POST /api/chat/session"));
    auto chat_id = sid.value("session_id", "");
    expect(cli.Post("/api/chat/" + chat_id + "/message", json{{"text", corpus()->pairs[0].question}}.dump(), js),
           200, "POST /api/chat/{id}/message");
    expect(cli.Put("/api/chat/" + chat_id + "/profile", R"({"version":"2.0"})", js), 200, "PUT /api/chat/{id}/profile");
    expect(cli.Get("/api/chat/" + chat_id), 200, "GET /api/chat/{id}");
    for (auto cat : content::kFaqCategories) {
        for (Language l : kAllLanguages) {
            expect(cli.Get("/api/faq?" + q({{"category", std::string(cat)}, {"lang", std::string(to_string(l))}})),
                   200, "GET /api/faq " + std::string(cat));
        }
    }
    for (auto sec : content::kMindfulnessSections) {
        expect(cli.Get("/api/mindfulness?" + q({{"section", std::string(sec)}, {"lang", "ar"}})), 200,
               "GET /api/mindfulness " + std::string(sec));
    }
    for (const auto& cat : bank.categories) {
        expect(cli.Get("/api/phrases?" + q({{"category", cat}, {"lang", "es"}})), 200, "GET /api/phrases " + cat);
    }
    expect(cli.Post("/api/translate", R"({"source_lang":"es","text":"hola"})", js), 200, "POST /api/translate");
    for (const auto& loc : content::kLocatorCategories) {
        expect(cli.Get("/api/locator?" + q({{"category", std::string(loc.slug)}})), 200, "GET /api/locator");
    }
    expect(cli.Get("/api/career/occupations"), 200, "GET /api/career/occupations");
    expect(cli.Get("/api/career/kinds"), 200, "GET /api/career/kinds");
    for (const auto& k : career::query_kinds()) {
        std::string slug(k.slug);
        auto golden = json::parse(text::read_file(kTests + "/golden/career/" + slug + ".json"));
        httplib::Params params;
        for (const auto& [key, value] : golden["params"].items()) params.emplace(key, value.get<std::string>());
        expect(cli.Get("/api/career/" + slug + "?" + q(params)), 200, "GET /api/career/" + slug);
    }
    auto resume_input = text::read_file(kTests + "/fixtures/resume/full_input.json");
    expect(cli.Post("/api/resume/build", resume_input, js), 200, "POST /api/resume/build");
    expect(cli.Post("/api/resume/yaml", resume_input, js), 200, "POST /api/resume/yaml");
    expect(cli.Post("/api/resume/review", text::read_file(kTests + "/fixtures/resume/sample_resume.pdf"),
                    "application/pdf"),
           200, "POST /api/resume/review");
    expect(cli.Get("/api/interview/questions"), 200, "GET /api/interview/questions");
    auto interview = json::parse(expect(cli.Post("/api/interview/session", R"({"question_id":"leisure-time"})", js),
                                        201, "POST /api/interview/session"));
    auto base = "/api/interview/session/" + interview.value("session_id", "");
    expect(cli.Post(base + "/turn", R"({"transcript":"I walk by the lake."})", js), 200, "POST .../turn");
    expect(cli.Post(base + "/end", "", js), 200, "POST .../end");
    expect(cli.Get(base), 200, "GET /api/interview/session/{id}");
    auto msid = json::parse(expect(cli.Post("/api/metrics/session", "", js), 201, "POST /api/metrics/session"));
    expect(cli.Post("/api/metrics/event",
                    json{{"session_id", msid.value("session_id", "")}, {"kind", "tab_opened"}, {"target", "locator"}}.dump(),
                    js),
           202, "POST /api/metrics/event");
    expect(cli.Get("/api/metrics/report"), 200, "GET /api/metrics/report");
    expect(cli.Get("/api/metrics/report?format=text"), 200, "GET /api/metrics/report text");
    expect(cli.Post("/api/metrics/classify", R"({"text":"help me write my resume objective"})", js), 200,
           "POST /api/metrics/classify");

    o.detail = std::to_string(bank.entries.size()) + " phrases, " + std::to_string(store.faq().size()) +
               " FAQ entries, " + std::to_string(invitations) + " invitations, " + std::to_string(endpoints) +
               " offline requests";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"verbatim retrieval", verbatim_retrieval},
        {"dispatch routing", dispatch_routing},
        {"metrics replay", metrics_replay},
        {"resume round trip", resume_round_trip},
        {"career query contract", career_contract},
        {"interview state machine", interview_state_machine},
        {"privacy firewall", privacy_firewall},
        {"translation and content completeness", content_completeness},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& [name, run] = criteria[i];
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.failures.push_back(std::string("exception: ") + e.what());
        }
        auto ms = std::chrono::duration_cast<Ms>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << name;
        if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
        std::cout << " [" << ms << " ms]\n";
        for (const auto& f : o.failures) std::cout << "    " << f << '\n';
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 1;
}
