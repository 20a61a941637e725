#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neighbor/error.hpp"

namespace neighbor {

enum class Role { user, assistant };

std::string_view to_string(Role role) noexcept;

struct ChatMessage {
    Role role = Role::user;
    std::string text;
};

/// What a request is for. Providers may ignore it; offline responders use it
/// to pick a canned reply shape.
enum class ChatPurpose { assistant, resume_review, interview_feedback, interview_summary };

struct ChatRequest {
    std::string model_id;
    std::string instructions;
    std::string grounding;  // reference material placed ahead of the conversation
    std::vector<ChatMessage> messages;
    ChatPurpose purpose = ChatPurpose::assistant;
};

/// Chat-completion backend. Implementations must be safe for concurrent
/// calls and throw Error{provider_failure} on any transport or upstream
/// failure.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string send(const ChatRequest& request) = 0;
};

/// Deterministic in-process provider. Counts calls, keeps the last request,
/// and can be switched into failure mode.
class MockChatProvider final : public ChatProvider {
public:
    using Responder = std::function<std::string(const ChatRequest&)>;

    MockChatProvider();
    explicit MockChatProvider(Responder responder);

    std::string send(const ChatRequest& request) override;

    std::size_t call_count() const noexcept { return calls_.load(); }
    std::optional<ChatRequest> last_request() const;
    void set_failing(bool failing) noexcept { failing_.store(failing); }

private:
    Responder responder_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<bool> failing_{false};
    mutable std::mutex mu_;
    std::optional<ChatRequest> last_;
};

// Canned replies in the labeled formats the resume and interview modules
// request; used by the mock and by the service's offline mode.
std::string offline_chat_reply(const ChatRequest& request);

}  // namespace neighbor
