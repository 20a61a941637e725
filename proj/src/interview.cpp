#include "neighbor/interview.hpp"

#include <set>

#include "neighbor/error.hpp"
#include "neighbor/ids.hpp"
#include "neighbor/text.hpp"

namespace neighbor::interview {
namespace {

std::string strip_marks(std::string_view line) {
    auto s = text::trim(line);
    while (!s.empty() && (s.front() == '*' || s.front() == '#' || s.front() == '-' ||
                          s.front() == '_' || s.front() == ' ')) {
        s.erase(0, 1);
    }
    if (s.rfind("\xE2\x80\xA2", 0) == 0) s.erase(0, 3);
    return text::trim(s);
}

std::string format_feedback(const TurnFeedback& f) {
    if (!f.available) return "Feedback unavailable.";
    std::string out;
    auto add = [&out](const char* label, const std::string& v) {
        if (v.empty()) return;
        if (!out.empty()) out += '\n';
        out += std::string(label) + ": " + v;
    };
    add("Clarity", f.clarity);
    add("Confidence", f.confidence);
    add("Completeness", f.completeness);
    add("Notes", f.notes);
    return out;
}

std::string recap(const TurnFeedback& f) {
    if (!f.available) return "feedback was unavailable for this answer.";
    std::string out;
    auto add = [&out](const char* label, const std::string& v) {
        if (v.empty()) return;
        if (!out.empty()) out += "; ";
        out += std::string(label) + " - " + v;
    };
    add("clarity", f.clarity);
    add("confidence", f.confidence);
    add("completeness", f.completeness);
    if (out.empty()) out = f.notes;
    return out;
}

}  // namespace

QuestionBank QuestionBank::parse(std::string_view jsonl) {
    QuestionBank bank;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    for (const auto& raw : text::split(jsonl, '\n')) {
        ++line_no;
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("text") ||
            !j["id"].is_string() || !j["text"].is_string()) {
            throw Error(ErrorCode::parse_error,
                        "question bank line " + std::to_string(line_no) + ": expected {id, text}");
        }
        Question q{j["id"].get<std::string>(), j["text"].get<std::string>()};
        if (q.id.empty() || text::trim(q.text).empty()) {
            throw Error(ErrorCode::empty_field,
                        "question bank line " + std::to_string(line_no) + ": empty id or text");
        }
        if (!ids.insert(q.id).second) {
            throw Error(ErrorCode::duplicate_id, "question '" + q.id + "' listed twice");
        }
        bank.questions_.push_back(std::move(q));
    }
    if (bank.questions_.empty()) throw Error(ErrorCode::parse_error, "question bank is empty");
    return bank;
}

QuestionBank QuestionBank::load(const std::string& path) { return parse(text::read_file(path)); }

const Question& QuestionBank::find(std::string_view id) const {
    for (const auto& q : questions_) {
        if (q.id == id) return q;
    }
    throw Error(ErrorCode::unknown_question, "no interview question '" + std::string(id) + "'");
}

TurnFeedback parse_turn_feedback(std::string_view reply) {
    TurnFeedback f;
    std::string* current = nullptr;
    for (const auto& raw : text::split(reply, '\n')) {
        auto line = strip_marks(raw);
        if (line.empty()) continue;
        std::string lower = line;
        for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::string* target = nullptr;
        std::size_t label = 0;
        for (auto [name, field] : {std::pair<std::string_view, std::string*>{"clarity", &f.clarity},
                                   {"confidence", &f.confidence},
                                   {"completeness", &f.completeness}}) {
            if (lower.rfind(name, 0) != 0) continue;
            auto colon = line.find(':', name.size());
            if (colon == std::string::npos ||
                line.find_first_not_of("* ", name.size()) != colon) {
                continue;
            }
            target = field;
            label = colon + 1;
        }
        if (target != nullptr) {
            current = target;
            auto value = strip_marks(line.substr(label));
            if (!current->empty() && !value.empty()) *current += ' ';
            *current += value;
        } else if (current != nullptr) {
            if (!current->empty()) *current += ' ';
            *current += line;
        } else {
            if (!f.notes.empty()) f.notes += ' ';
            f.notes += line;
        }
    }
    f.available = !f.clarity.empty() || !f.confidence.empty() || !f.completeness.empty() ||
                  !f.notes.empty();
    return f;
}

std::string_view to_string(State s) noexcept { return s == State::active ? "active" : "ended"; }

nlohmann::json Session::to_json() const {
    nlohmann::json j;
    j["session_id"] = session_id;
    j["question"] = {{"id", question.id}, {"text", question.text}};
    j["state"] = to_string(state);
    j["turns"] = nlohmann::json::array();
    for (const auto& t : turns) {
        j["turns"].push_back({{"transcript", t.transcript},
                              {"feedback",
                               {{"available", t.feedback.available},
                                {"clarity", t.feedback.clarity},
                                {"confidence", t.feedback.confidence},
                                {"completeness", t.feedback.completeness},
                                {"notes", t.feedback.notes}}}});
    }
    j["summary"] = summary ? nlohmann::json(*summary) : nlohmann::json(nullptr);
    return j;
}

std::size_t summary_turn_references(std::string_view summary, std::size_t max_turn) {
    std::set<std::size_t> seen;
    for (const auto& raw : text::split(summary, '\n')) {
        auto line = text::trim(raw);
        if (line.rfind("Turn ", 0) != 0) continue;
        std::size_t i = 5, n = 0;
        while (i < line.size() && line[i] >= '0' && line[i] <= '9' && n < 1000000) {
            n = n * 10 + static_cast<std::size_t>(line[i++] - '0');
        }
        if (i > 5 && i < line.size() && line[i] == ':' && n >= 1 && n <= max_turn) seen.insert(n);
    }
    return seen.size();
}

std::string_view feedback_instructions() {
    return "You are a friendly interview coach helping someone practice for a job interview. The "
           "first message gives the interview question; the person then answers it. Give short, "
           "encouraging feedback on their latest answer in exactly three labeled lines:\n"
           "Clarity:\nConfidence:\nCompleteness:\n"
           "Use plain words. Do not give scores or ratings.";
}

std::string_view summary_instructions() {
    return "You are a friendly interview coach. Write a short written summary of this practice "
           "session: what went well across the answers and two or three actionable suggestions. "
           "Refer to answers as Turn 1, Turn 2 and so on. Do not give scores or ratings.";
}

Coach::Coach(QuestionBank bank, std::shared_ptr<ChatProvider> provider, std::string model_id)
    : bank_(std::move(bank)), provider_(std::move(provider)), model_id_(std::move(model_id)) {}

std::shared_ptr<Coach::Slot> Coach::slot(std::string_view id) const {
    std::shared_lock lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw Error(ErrorCode::unknown_session, "no interview session '" + std::string(id) + "'");
    }
    return it->second;
}

Session Coach::start(std::string_view question_id) {
    auto fresh = std::make_shared<Slot>();
    fresh->session.question = bank_.find(question_id);
    std::unique_lock lock(mu_);
    do {
        fresh->session.session_id = random_uuid();
    } while (sessions_.contains(fresh->session.session_id));
    sessions_.emplace(fresh->session.session_id, fresh);
    return fresh->session;
}

TurnFeedback Coach::submit_turn(std::string_view session_id, std::string_view transcript) {
    auto s = slot(session_id);
    std::lock_guard lock(s->mu);
    Session& session = s->session;
    if (session.state == State::ended) {
        throw Error(ErrorCode::session_ended, "interview session has ended");
    }
    if (text::trim(transcript).empty()) {
        throw Error(ErrorCode::empty_transcript, "answer transcript is empty");
    }

    TurnFeedback feedback;
    if (provider_) {
        ChatRequest request;
        request.model_id = model_id_;
        request.instructions = std::string(feedback_instructions());
        request.purpose = ChatPurpose::interview_feedback;
        request.messages.push_back({Role::user, "Interview question: " + session.question.text});
        for (const auto& t : session.turns) {
            request.messages.push_back({Role::user, t.transcript});
            request.messages.push_back({Role::assistant, format_feedback(t.feedback)});
        }
        request.messages.push_back({Role::user, std::string(transcript)});
        try {
            feedback = parse_turn_feedback(provider_->send(request));
        } catch (const std::exception&) {
            feedback = TurnFeedback{};
        }
    }
    session.turns.push_back({std::string(transcript), feedback, Clock::now()});
    return feedback;
}

std::string Coach::end(std::string_view session_id) {
    auto s = slot(session_id);
    std::lock_guard lock(s->mu);
    Session& session = s->session;
    if (session.state == State::ended) {
        throw Error(ErrorCode::session_ended, "interview session has already ended");
    }
    if (session.turns.empty()) {
        throw Error(ErrorCode::no_turns, "answer the question at least once before ending");
    }

    std::string overview;
    if (provider_) {
        ChatRequest request;
        request.model_id = model_id_;
        request.instructions = std::string(summary_instructions());
        request.purpose = ChatPurpose::interview_summary;
        std::string body = "Interview question: " + session.question.text + "\n";
        for (std::size_t i = 0; i < session.turns.size(); ++i) {
            body += "\nTurn " + std::to_string(i + 1) + " answer: " + session.turns[i].transcript +
                    "\nTurn " + std::to_string(i + 1) +
                    " feedback: " + format_feedback(session.turns[i].feedback) + "\n";
        }
        request.messages.push_back({Role::user, body});
        try {
            overview = text::trim(provider_->send(request));
        } catch (const std::exception&) {
            overview.clear();
        }
    }
    if (overview.empty()) {
        overview = "A written summary from the coach is not available right now. Here is the "
                   "feedback on each of your answers.";
    }

    std::string summary = overview + "\n";
    for (std::size_t i = 0; i < session.turns.size(); ++i) {
        summary += "\nTurn " + std::to_string(i + 1) + ": " + recap(session.turns[i].feedback);
    }
    session.summary = summary;
    session.state = State::ended;
    return summary;
}

Session Coach::session(std::string_view session_id) const {
    auto s = slot(session_id);
    std::lock_guard lock(s->mu);
    return s->session;
}

}  // namespace neighbor::interview
