#include "neighbor/chat_provider.hpp"

namespace neighbor {

std::string_view to_string(Role role) noexcept {
    return role == Role::user ? "user" : "assistant";
}

MockChatProvider::MockChatProvider() : MockChatProvider(offline_chat_reply) {}

MockChatProvider::MockChatProvider(Responder responder) : responder_(std::move(responder)) {}

std::string MockChatProvider::send(const ChatRequest& request) {
    calls_.fetch_add(1);
    {
        std::lock_guard lock(mu_);
        last_ = request;
    }
    if (failing_.load()) throw Error(ErrorCode::provider_failure, "mock provider set to fail");
    return responder_(request);
}

std::optional<ChatRequest> MockChatProvider::last_request() const {
    std::lock_guard lock(mu_);
    return last_;
}

std::string offline_chat_reply(const ChatRequest& request) {
    switch (request.purpose) {
        case ChatPurpose::resume_review:
            return "Strengths:\n- Clear contact details at the top.\n- Work history lists concrete duties.\n"
                   "Weaknesses:\n- Few results are described.\n"
                   "Improvements:\n- Start each bullet with an action verb.\n"
                   "- Add a short objective that names the job you want.\n";
        case ChatPurpose::interview_feedback:
            return "Clarity: The answer followed a clear order.\n"
                   "Confidence: Steady tone; try fewer filler words.\n"
                   "Completeness: Add one example from a past job.\n";
        case ChatPurpose::interview_summary:
            return "You answered every question and kept a steady pace. Practice adding one short "
                   "example to each answer.";
        case ChatPurpose::assistant:
            break;
    }
    std::string last;
    if (!request.messages.empty()) last = request.messages.back().text;
    return "Thanks for your question. A counselor-reviewed answer is not available offline; here "
           "is general guidance about: " + last;
}

}  // namespace neighbor
