#include "neighbor/assistant.hpp"

#include <nlohmann/json.hpp>

#include "neighbor/error.hpp"
#include "neighbor/ids.hpp"

namespace neighbor {

std::string_view to_string(ProfileVersion v) noexcept {
    switch (v) {
        case ProfileVersion::v1_0: return "1.0";
        case ProfileVersion::v2_0: return "2.0";
        case ProfileVersion::v3_0: return "3.0";
    }
    return "3.0";
}

ProfileVersion parse_profile_version(std::string_view s) {
    if (s == "1.0") return ProfileVersion::v1_0;
    if (s == "2.0") return ProfileVersion::v2_0;
    if (s == "3.0") return ProfileVersion::v3_0;
    throw Error(ErrorCode::unknown_version, "unknown instruction profile '" + std::string(s) + "'");
}

std::string_view to_string(ReplySource s) noexcept {
    switch (s) {
        case ReplySource::corpus_verbatim: return "corpus-verbatim";
        case ReplySource::generated: return "generated";
        case ReplySource::degraded: return "degraded";
    }
    return "degraded";
}

LocalizedText default_fallback_text() {
    return {
        {Language::en,
         "Sorry, the assistant is unavailable right now. You can find answers in the Common "
         "Questions tab."},
        {Language::es,
         "Lo sentimos, el asistente no está disponible en este momento. Puede encontrar respuestas "
         "en la pestaña Preguntas frecuentes."},
        {Language::fr,
         "Désolé, l'assistant n'est pas disponible pour le moment. Vous trouverez des réponses dans "
         "l'onglet Questions fréquentes."},
        {Language::ar,
         "عذرًا، المساعد غير متاح الآن. يمكنك العثور على إجابات في قسم الأسئلة الشائعة."},
    };
}

Assistant::Assistant(std::shared_ptr<const qa::QACorpus> corpus,
                     std::shared_ptr<ChatProvider> provider, AssistantConfig config)
    : corpus_(std::move(corpus)), provider_(std::move(provider)), config_(std::move(config)) {
    if (!corpus_) throw Error(ErrorCode::validation_error, "assistant requires a corpus");
    if (config_.fallback_text.empty()) config_.fallback_text = default_fallback_text();
    for (Language lang : kAllLanguages) {
        if (!config_.fallback_text.contains(lang)) {
            throw Error(ErrorCode::missing_variant, "assistant fallback text lacks '" +
                                                        std::string(to_string(lang)) + "'");
        }
    }
}

ChatSession Assistant::create_session(std::string_view language_code) {
    auto fresh = std::make_shared<Slot>();
    fresh->session.language_pref = parse_language(language_code);
    fresh->session.profile = config_.default_profile;

    std::unique_lock lock(sessions_mu_);
    do {
        fresh->session.session_id = random_uuid();
    } while (sessions_.contains(fresh->session.session_id));
    sessions_.emplace(fresh->session.session_id, fresh);
    return fresh->session;
}

std::shared_ptr<Assistant::Slot> Assistant::slot(std::string_view session_id) const {
    std::shared_lock lock(sessions_mu_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        throw Error(ErrorCode::unknown_session,
                    "no chat session '" + std::string(session_id) + "'");
    }
    return it->second;
}

AssistantReply Assistant::handle_message(std::string_view session_id, std::string_view text) {
    if (qa::normalize(text).empty()) {
        throw Error(ErrorCode::empty_message, "message is empty");
    }
    auto s = slot(session_id);
    std::lock_guard lock(s->mu);
    ChatSession& session = s->session;

    auto stamp = [&session] {
        auto now = Clock::now();
        if (!session.history.empty() && now < session.history.back().timestamp) {
            now = session.history.back().timestamp;
        }
        return now;
    };

    AssistantReply reply;
    auto match = qa::match_query(*corpus_, text, config_.match_threshold);
    if (match.verdict == qa::Verdict::verbatim_hit) {
        reply.text = qa::get_answer(*corpus_, *match.pair_id);
        reply.source = ReplySource::corpus_verbatim;
        reply.matched_pair = match.pair_id;
    } else if (provider_) {
        ChatRequest request;
        request.model_id = config_.model_id;
        request.instructions = std::string(instruction_profile(session.profile).text);
        request.grounding = corpus_->source_text;
        request.purpose = ChatPurpose::assistant;
        request.messages.reserve(session.history.size() + 1);
        for (const auto& entry : session.history) request.messages.push_back({entry.role, entry.text});
        request.messages.push_back({Role::user, std::string(text)});
        try {
            reply.text = provider_->send(request);
            reply.source = ReplySource::generated;
        } catch (const std::exception&) {
            reply.source = ReplySource::degraded;
        }
        if (reply.source == ReplySource::generated && reply.text.empty()) {
            reply.source = ReplySource::degraded;
        }
    } else {
        reply.source = ReplySource::degraded;
    }
    if (reply.source == ReplySource::degraded) {
        reply.text = config_.fallback_text.at(session.language_pref);
    }

    session.history.push_back({Role::user, std::string(text), stamp()});
    session.history.push_back({Role::assistant, reply.text, stamp()});
    return reply;
}

ChatSession Assistant::set_profile(std::string_view session_id, std::string_view version) {
    auto parsed = parse_profile_version(version);
    auto s = slot(session_id);
    std::lock_guard lock(s->mu);
    s->session.profile = parsed;
    return s->session;
}

ChatSession Assistant::session(std::string_view session_id) const {
    auto s = slot(session_id);
    std::lock_guard lock(s->mu);
    return s->session;
}

std::size_t Assistant::session_count() const {
    std::shared_lock lock(sessions_mu_);
    return sessions_.size();
}

void Assistant::write_snapshot(std::ostream& out) const {
    std::vector<std::shared_ptr<Slot>> slots;
    {
        std::shared_lock lock(sessions_mu_);
        for (const auto& [id, s] : sessions_) slots.push_back(s);
    }
    for (const auto& s : slots) {
        std::lock_guard lock(s->mu);
        nlohmann::json j;
        j["session_id"] = s->session.session_id;
        j["language"] = to_string(s->session.language_pref);
        j["profile"] = to_string(s->session.profile);
        j["history"] = nlohmann::json::array();
        for (const auto& e : s->session.history) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          e.timestamp.time_since_epoch())
                          .count();
            j["history"].push_back({{"role", to_string(e.role)}, {"text", e.text}, {"ts_ms", ms}});
        }
        out << j.dump() << '\n';
    }
}

}  // namespace neighbor
