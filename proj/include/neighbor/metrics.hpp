#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace neighbor::metrics {

enum class EventKind {
    tab_opened,
    button_clicked,
    question_submitted,
    audio_played,
    resume_generated,
    career_panel_opened,
    link_accessed,
};

inline constexpr std::array<EventKind, 7> kAllEventKinds{
    EventKind::tab_opened,          EventKind::button_clicked, EventKind::question_submitted,
    EventKind::audio_played,        EventKind::resume_generated,
    EventKind::career_panel_opened, EventKind::link_accessed,
};

std::string_view to_string(EventKind k) noexcept;
// Throws Error{schema_violation}.
EventKind parse_event_kind(std::string_view s);

enum class QuestionCategory {
    finding_a_job,
    resume_cv_creation,
    common_question_type,
    preparing_for_an_interview,
    emotional_support,
    asked_in_error,
};

inline constexpr std::array<QuestionCategory, 6> kAllCategories{
    QuestionCategory::finding_a_job,         QuestionCategory::resume_cv_creation,
    QuestionCategory::common_question_type,  QuestionCategory::preparing_for_an_interview,
    QuestionCategory::emotional_support,     QuestionCategory::asked_in_error,
};

std::string_view slug(QuestionCategory c) noexcept;
std::string_view display_name(QuestionCategory c) noexcept;
// Accepts the slug. Throws Error{schema_violation}.
QuestionCategory parse_category(std::string_view slug);

// Tab slugs in report order, with display names.
struct TabInfo {
    std::string_view slug;
    std::string_view display;
};
const std::vector<TabInfo>& tabs();

// Closed label vocabulary for one event kind.
const std::vector<std::string>& targets(EventKind kind);

using Clock = std::chrono::system_clock;

struct UsageEvent {
    std::string session_id;
    EventKind kind = EventKind::tab_opened;
    std::string target;
    Clock::time_point timestamp;
};

std::string new_session_id();

// True when `s` contains something shaped like an IPv4 or IPv6 address or an
// email address.
bool looks_like_pii(std::string_view s);

// Throws Error{pii_rejected} when the session id or target carries an address,
// otherwise Error{schema_violation} for a malformed id or an unlisted target.
void validate(const UsageEvent& event);

// Strict JSON intake: exactly session_id, kind, target and an optional
// timestamp_ms. Anything else is a schema violation.
UsageEvent event_from_json(const nlohmann::json& j);

// "YYYYMMDDTHHMMSS.mmmZ"; the compact form keeps colons out of the log.
std::string format_timestamp(Clock::time_point t);
// Throws Error{parse_error}.
Clock::time_point parse_timestamp(std::string_view s);

// Tab-separated timestamp, session id, kind, target.
std::string serialize(const UsageEvent& event);

struct AggregateReport {
    std::size_t session_count = 0;
    std::size_t question_count = 0;
    std::size_t resume_generated_count = 0;
    std::size_t audio_play_count = 0;
    std::size_t event_count = 0;
    std::size_t corrupt_lines = 0;
    std::map<std::string, std::size_t> tab_counts;       // every tab slug present
    std::map<std::string, std::size_t> category_counts;  // every category slug present
    std::map<std::string, std::size_t> career_panel_counts;
    std::map<std::string, std::size_t> audio_by_language;
    std::map<std::string, std::size_t> button_counts;
    std::map<std::string, std::size_t> link_counts;
    std::vector<std::size_t> corrupt_line_numbers;

    std::size_t american_job_center_count() const;

    nlohmann::ordered_json to_json() const;
    std::string to_text() const;

    // Componentwise sum. Session counts add, which is exact only when the two
    // logs share no session ids.
    AggregateReport& operator+=(const AggregateReport& other);
    friend bool operator==(const AggregateReport&, const AggregateReport&) = default;
};

AggregateReport operator+(AggregateReport a, const AggregateReport& b);

AggregateReport empty_report();

// Lines that fail to parse or validate are skipped and counted.
AggregateReport aggregate(std::string_view log_text);

/// Append-only event log. Every accepted event is written with O_APPEND and
/// fsync'd before record() returns.
class EventLog {
public:
    explicit EventLog(std::string path);
    ~EventLog();
    EventLog(const EventLog&) = delete;
    EventLog& operator=(const EventLog&) = delete;

    // Validates, appends and syncs. Throws Error{pii_rejected},
    // Error{schema_violation} or Error{io_error}.
    void record(const UsageEvent& event);

    std::size_t size() const;
    std::string snapshot() const;
    AggregateReport aggregate() const;
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
    int fd_ = -1;
    mutable std::mutex mu_;
    std::size_t lines_ = 0;
};

/// Keyword classifier. Categories are tried in file order; the one with the
/// most keyword hits wins and earlier categories win ties. No hit at all
/// yields the fallback class.
class QuestionClassifier {
public:
    struct Rule {
        QuestionCategory category;
        std::vector<std::string> keywords;  // normalized; may contain spaces
    };

    // {"fallback": slug, "categories": [{"slug": ..., "keywords": [...]}, ...]}
    static QuestionClassifier parse(std::string_view json_text);
    static QuestionClassifier load(const std::string& path);

    QuestionCategory classify(std::string_view text) const;

    const std::vector<Rule>& rules() const noexcept { return rules_; }

private:
    std::vector<Rule> rules_;
    QuestionCategory fallback_ = QuestionCategory::asked_in_error;
};

}  // namespace neighbor::metrics
