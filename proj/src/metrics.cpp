#include "neighbor/metrics.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>

#include "neighbor/career.hpp"
#include "neighbor/error.hpp"
#include "neighbor/ids.hpp"
#include "neighbor/language.hpp"
#include "neighbor/qa_corpus.hpp"
#include "neighbor/text.hpp"

namespace neighbor::metrics {
namespace {

struct CategoryInfo {
    QuestionCategory category;
    std::string_view slug;
    std::string_view display;
};

constexpr std::array<CategoryInfo, 6> kCategories{{
    {QuestionCategory::finding_a_job, "finding-a-job", "Finding a job"},
    {QuestionCategory::resume_cv_creation, "resume-cv-creation", "Resume/CV creation"},
    {QuestionCategory::common_question_type, "common-question-type", "Common-Question type"},
    {QuestionCategory::preparing_for_an_interview, "preparing-for-an-interview",
     "Preparing for an interview"},
    {QuestionCategory::emotional_support, "emotional-support", "Emotional support"},
    {QuestionCategory::asked_in_error, "questions-asked-in-error", "Questions asked in error"},
}};

const CategoryInfo& category_info(QuestionCategory c) {
    return kCategories[static_cast<std::size_t>(c)];
}

std::vector<std::string> strings_of(std::initializer_list<std::string_view> items) {
    return {items.begin(), items.end()};
}

bool valid_session_id(std::string_view s) {
    if (s.size() < 8 || s.size() > 64) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) != 0 || c == '-' || c == '_';
    });
}

std::size_t count_of(const std::map<std::string, std::size_t>& m, const std::string& key) {
    auto it = m.find(key);
    return it == m.end() ? 0 : it->second;
}

void add_into(std::map<std::string, std::size_t>& into,
              const std::map<std::string, std::size_t>& from) {
    for (const auto& [k, v] : from) into[k] += v;
}

std::string errno_text() { return std::strerror(errno); }

}  // namespace

std::string_view to_string(EventKind k) noexcept {
    switch (k) {
        case EventKind::tab_opened: return "tab_opened";
        case EventKind::button_clicked: return "button_clicked";
        case EventKind::question_submitted: return "question_submitted";
        case EventKind::audio_played: return "audio_played";
        case EventKind::resume_generated: return "resume_generated";
        case EventKind::career_panel_opened: return "career_panel_opened";
        case EventKind::link_accessed: return "link_accessed";
    }
    return "tab_opened";
}

EventKind parse_event_kind(std::string_view s) {
    for (EventKind k : kAllEventKinds) {
        if (to_string(k) == s) return k;
    }
    throw Error(ErrorCode::schema_violation, "unknown event kind '" + std::string(s) + "'");
}

std::string_view slug(QuestionCategory c) noexcept { return category_info(c).slug; }
std::string_view display_name(QuestionCategory c) noexcept { return category_info(c).display; }

QuestionCategory parse_category(std::string_view s) {
    for (const auto& info : kCategories) {
        if (info.slug == s) return info.category;
    }
    throw Error(ErrorCode::schema_violation, "unknown question category '" + std::string(s) + "'");
}

const std::vector<TabInfo>& tabs() {
    static const std::vector<TabInfo> kTabs{
        {"resume", "Resume"},
        {"career-services", "Career Services"},
        {"mindfulness", "Mindfulness"},
        {"translator", "Translator"},
        {"common-questions", "Common Questions"},
        {"locator", "Locator"},
    };
    return kTabs;
}

const std::vector<std::string>& targets(EventKind kind) {
    static const auto kTabTargets = [] {
        std::vector<std::string> v;
        for (const auto& t : tabs()) v.emplace_back(t.slug);
        return v;
    }();
    static const auto kButtons = strings_of({
        "chat-open", "chat-send", "chat-microphone", "chat-close", "profile-switch",
        "faq-expand", "phrase-category", "phrase-translate", "language-switch",
        "resume-build", "resume-download", "resume-review", "interview-start",
        "interview-submit", "interview-end", "career-search", "locator-search",
        "mindfulness-expand",
    });
    static const auto kCategorySlugs = [] {
        std::vector<std::string> v;
        for (const auto& c : kCategories) v.emplace_back(c.slug);
        return v;
    }();
    static const auto kLanguages = [] {
        std::vector<std::string> v;
        for (Language l : kAllLanguages) v.emplace_back(neighbor::to_string(l));
        return v;
    }();
    static const auto kResume = strings_of({"resume-builder"});
    static const auto kPanels = [] {
        std::vector<std::string> v;
        for (const auto& k : career::query_kinds()) v.emplace_back(k.slug);
        return v;
    }();
    static const auto kLinks = strings_of({
        "faq-resource", "mindfulness-video", "locator-map", "locator-website",
        "career-resource", "crisis-line",
    });
    switch (kind) {
        case EventKind::tab_opened: return kTabTargets;
        case EventKind::button_clicked: return kButtons;
        case EventKind::question_submitted: return kCategorySlugs;
        case EventKind::audio_played: return kLanguages;
        case EventKind::resume_generated: return kResume;
        case EventKind::career_panel_opened: return kPanels;
        case EventKind::link_accessed: return kLinks;
    }
    return kTabTargets;
}

std::string new_session_id() { return random_uuid(); }

bool looks_like_pii(std::string_view s) {
    static const std::regex kIpv4(R"((^|[^0-9])\d{1,3}(\.\d{1,3}){3}([^0-9]|$))");
    static const std::regex kIpv6(R"(([0-9A-Fa-f]{0,4}:){2,7}[0-9A-Fa-f]{0,4})");
    static const std::regex kEmail(R"([^\s@]+@[^\s@]+\.[^\s@]+)");
    std::string str(s);
    return std::regex_search(str, kIpv4) || std::regex_search(str, kIpv6) ||
           std::regex_search(str, kEmail);
}

void validate(const UsageEvent& event) {
    if (looks_like_pii(event.target) || looks_like_pii(event.session_id)) {
        throw Error(ErrorCode::pii_rejected, "event carries an address-like value");
    }
    if (!valid_session_id(event.session_id)) {
        throw Error(ErrorCode::schema_violation, "malformed session id");
    }
    const auto& allowed = targets(event.kind);
    if (std::find(allowed.begin(), allowed.end(), event.target) == allowed.end()) {
        throw Error(ErrorCode::schema_violation, "target '" + event.target + "' is not a " +
                                                     std::string(to_string(event.kind)) +
                                                     " label");
    }
}

UsageEvent event_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::schema_violation, "event must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "session_id" && key != "kind" && key != "target" && key != "timestamp_ms") {
            throw Error(ErrorCode::schema_violation, "unexpected event field '" + key + "'");
        }
    }
    auto string_field = [&j](const char* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) {
            throw Error(ErrorCode::schema_violation,
                        std::string("event field '") + key + "' must be a string");
        }
        return it->get<std::string>();
    };
    UsageEvent e;
    e.session_id = string_field("session_id");
    e.target = string_field("target");
    e.kind = parse_event_kind(string_field("kind"));
    e.timestamp = Clock::now();
    if (auto it = j.find("timestamp_ms"); it != j.end()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
            throw Error(ErrorCode::schema_violation, "timestamp_ms must be a nonnegative integer");
        }
        e.timestamp = Clock::time_point(std::chrono::milliseconds(it->get<std::int64_t>()));
    }
    validate(e);
    return e;
}

std::string format_timestamp(Clock::time_point t) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
    std::time_t secs = static_cast<std::time_t>(ms / 1000);
    if (ms < 0 && ms % 1000 != 0) --secs;
    auto frac = ((ms % 1000) + 1000) % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d%02d%02dT%02d%02d%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                  static_cast<int>(frac));
    return buf;
}

Clock::time_point parse_timestamp(std::string_view s) {
    std::tm tm{};
    int ms = 0;
    int consumed = 0;
    std::string str(s);
    if (s.size() != 20 ||
        std::sscanf(str.c_str(), "%4d%2d%2dT%2d%2d%2d.%3dZ%n", &tm.tm_year, &tm.tm_mon,
                    &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms, &consumed) != 7 ||
        consumed != 20 || tm.tm_mon < 1 || tm.tm_mon > 12 || tm.tm_mday < 1 || tm.tm_mday > 31 ||
        tm.tm_hour > 23 || tm.tm_min > 59 || tm.tm_sec > 60) {
        throw Error(ErrorCode::parse_error, "bad timestamp '" + str + "'");
    }
    tm.tm_year -= 1900;
    tm.tm_mon -= 1;
    return Clock::from_time_t(timegm(&tm)) + std::chrono::milliseconds(ms);
}

std::string serialize(const UsageEvent& event) {
    std::string line = format_timestamp(event.timestamp);
    line += '\t';
    line += event.session_id;
    line += '\t';
    line += to_string(event.kind);
    line += '\t';
    line += event.target;
    return line;
}

std::size_t AggregateReport::american_job_center_count() const {
    return count_of(career_panel_counts, "american-job-center");
}

AggregateReport& AggregateReport::operator+=(const AggregateReport& o) {
    session_count += o.session_count;
    question_count += o.question_count;
    resume_generated_count += o.resume_generated_count;
    audio_play_count += o.audio_play_count;
    event_count += o.event_count;
    corrupt_lines += o.corrupt_lines;
    add_into(tab_counts, o.tab_counts);
    add_into(category_counts, o.category_counts);
    add_into(career_panel_counts, o.career_panel_counts);
    add_into(audio_by_language, o.audio_by_language);
    add_into(button_counts, o.button_counts);
    add_into(link_counts, o.link_counts);
    // Line numbers are local to each log and do not combine.
    corrupt_line_numbers.clear();
    return *this;
}

AggregateReport operator+(AggregateReport a, const AggregateReport& b) {
    a += b;
    return a;
}

AggregateReport empty_report() {
    AggregateReport r;
    for (const auto& t : tabs()) r.tab_counts[std::string(t.slug)] = 0;
    for (const auto& c : kCategories) r.category_counts[std::string(c.slug)] = 0;
    for (const auto& k : career::query_kinds()) r.career_panel_counts[std::string(k.slug)] = 0;
    for (Language l : kAllLanguages) r.audio_by_language[std::string(neighbor::to_string(l))] = 0;
    for (const auto& b : targets(EventKind::button_clicked)) r.button_counts[b] = 0;
    for (const auto& l : targets(EventKind::link_accessed)) r.link_counts[l] = 0;
    return r;
}

AggregateReport aggregate(std::string_view log_text) {
    AggregateReport r = empty_report();
    std::set<std::string, std::less<>> sessions;
    std::size_t line_no = 0;
    for (const auto& raw : text::split(log_text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        auto fields = text::split(line, '\t');
        UsageEvent e;
        try {
            if (fields.size() != 4) throw Error(ErrorCode::parse_error, "field count");
            e.timestamp = parse_timestamp(fields[0]);
            e.session_id = fields[1];
            e.kind = parse_event_kind(fields[2]);
            e.target = fields[3];
            validate(e);
        } catch (const Error&) {
            ++r.corrupt_lines;
            r.corrupt_line_numbers.push_back(line_no);
            continue;
        }
        ++r.event_count;
        sessions.insert(e.session_id);
        switch (e.kind) {
            case EventKind::tab_opened: ++r.tab_counts[e.target]; break;
            case EventKind::button_clicked: ++r.button_counts[e.target]; break;
            case EventKind::question_submitted:
                ++r.question_count;
                ++r.category_counts[e.target];
                break;
            case EventKind::audio_played:
                ++r.audio_play_count;
                ++r.audio_by_language[e.target];
                break;
            case EventKind::resume_generated: ++r.resume_generated_count; break;
            case EventKind::career_panel_opened: ++r.career_panel_counts[e.target]; break;
            case EventKind::link_accessed: ++r.link_counts[e.target]; break;
        }
    }
    r.session_count = sessions.size();
    return r;
}

nlohmann::ordered_json AggregateReport::to_json() const {
    nlohmann::ordered_json j;
    j["session_count"] = session_count;
    j["question_count"] = question_count;
    j["resume_generated_count"] = resume_generated_count;
    j["american_job_center_count"] = american_job_center_count();
    j["audio_play_count"] = audio_play_count;
    j["event_count"] = event_count;
    auto& tabs_json = j["tab_counts"] = nlohmann::ordered_json::object();
    for (const auto& t : tabs()) tabs_json[std::string(t.slug)] = count_of(tab_counts, std::string(t.slug));
    auto& cats = j["category_counts"] = nlohmann::ordered_json::object();
    for (const auto& c : kCategories) cats[std::string(c.slug)] = count_of(category_counts, std::string(c.slug));
    j["career_panel_counts"] = career_panel_counts;
    j["audio_by_language"] = audio_by_language;
    j["button_counts"] = button_counts;
    j["link_counts"] = link_counts;
    j["diagnostics"] = {{"corrupt_lines", corrupt_lines},
                        {"corrupt_line_numbers", corrupt_line_numbers}};
    return j;
}

std::string AggregateReport::to_text() const {
    std::ostringstream out;
    auto row = [&out](std::string_view label, std::size_t value) {
        out << "  " << std::left << std::setw(48) << label << std::right << std::setw(6) << value
            << '\n';
    };
    out << "Key results\n";
    row("Number of user sessions", session_count);
    row("Number of questions asked to the assistant", question_count);
    row("Resumes generated through the resume builder", resume_generated_count);
    row("American Job Center accessed", american_job_center_count());
    row("Audio pronunciation played", audio_play_count);
    out << "\nTabs accessed\n";
    for (const auto& t : tabs()) row(t.display, count_of(tab_counts, std::string(t.slug)));
    out << "\nQuestion types\n";
    for (const auto& c : kCategories) row(c.display, count_of(category_counts, std::string(c.slug)));
    out << "\nDiagnostics\n";
    row("Events counted", event_count);
    row("Corrupt lines skipped", corrupt_lines);
    return out.str();
}

EventLog::EventLog(std::string path) : path_(std::move(path)) {
    fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0600);
    if (fd_ < 0) throw Error(ErrorCode::io_error, "cannot open event log '" + path_ + "': " + errno_text());
    try {
        auto existing = text::read_file(path_);
        lines_ = static_cast<std::size_t>(std::count(existing.begin(), existing.end(), '\n'));
    } catch (...) {
        ::close(fd_);
        throw;
    }
}

EventLog::~EventLog() {
    if (fd_ >= 0) ::close(fd_);
}

void EventLog::record(const UsageEvent& event) {
    validate(event);
    std::string line = serialize(event) + "\n";
    std::lock_guard lock(mu_);
    std::size_t written = 0;
    while (written < line.size()) {
        auto n = ::write(fd_, line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(ErrorCode::io_error, "event log write failed: " + errno_text());
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) throw Error(ErrorCode::io_error, "event log sync failed: " + errno_text());
    ++lines_;
}

std::size_t EventLog::size() const {
    std::lock_guard lock(mu_);
    return lines_;
}

std::string EventLog::snapshot() const {
    std::lock_guard lock(mu_);
    return text::read_file(path_);
}

AggregateReport EventLog::aggregate() const { return metrics::aggregate(snapshot()); }

QuestionClassifier QuestionClassifier::parse(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::parse_error, std::string("classifier rules: ") + e.what());
    }
    QuestionClassifier c;
    try {
        c.fallback_ = parse_category(j.at("fallback").get<std::string>());
        std::set<QuestionCategory> seen;
        for (const auto& entry : j.at("categories")) {
            Rule rule;
            rule.category = parse_category(entry.at("slug").get<std::string>());
            if (rule.category == c.fallback_ || !seen.insert(rule.category).second) {
                throw Error(ErrorCode::duplicate_id, "classifier rules: category '" +
                                                         std::string(slug(rule.category)) +
                                                         "' listed twice");
            }
            for (const auto& kw : entry.at("keywords")) {
                auto norm = qa::normalize(kw.get<std::string>());
                if (norm.empty()) {
                    throw Error(ErrorCode::empty_field, "classifier rules: empty keyword");
                }
                rule.keywords.push_back(std::move(norm));
            }
            c.rules_.push_back(std::move(rule));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("classifier rules: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::schema_violation) throw Error(ErrorCode::parse_error, e.what());
        throw;
    }
    return c;
}

QuestionClassifier QuestionClassifier::load(const std::string& path) {
    return parse(text::read_file(path));
}

QuestionCategory QuestionClassifier::classify(std::string_view text) const {
    auto padded = " " + qa::normalize(text) + " ";
    std::size_t best_hits = 0;
    QuestionCategory best = fallback_;
    for (const auto& rule : rules_) {
        std::size_t hits = 0;
        for (const auto& kw : rule.keywords) {
            auto needle = " " + kw + " ";
            for (auto pos = padded.find(needle); pos != std::string::npos;
                 pos = padded.find(needle, pos + 1)) {
                ++hits;
            }
        }
        if (hits > best_hits) {
            best_hits = hits;
            best = rule.category;
        }
    }
    return best;
}

}  // namespace neighbor::metrics
