#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "neighbor/career.hpp"
#include "neighbor/chat_provider.hpp"
#include "neighbor/translator.hpp"

namespace neighbor {

inline constexpr const char* kChatKeyEnv = "NEIGHBOR_CHAT_API_KEY";
inline constexpr const char* kTranslationKeyEnv = "NEIGHBOR_TRANSLATION_API_KEY";
inline constexpr const char* kCareerTokenEnv = "NEIGHBOR_CAREER_API_TOKEN";
inline constexpr const char* kCareerUserEnv = "NEIGHBOR_CAREER_USER_ID";

// Unset and empty variables both read as absent.
std::optional<std::string> env_secret(const char* name);

struct UpstreamEndpoint {
    std::string base_url;  // scheme://host[:port], no trailing path
    std::chrono::milliseconds timeout{30000};
};

/// Chat-completions client (OpenAI wire format). Instructions and grounding
/// become the system message; history follows as user/assistant turns.
class HttpChatProvider final : public ChatProvider {
public:
    HttpChatProvider(UpstreamEndpoint endpoint, std::string api_key);
    std::string send(const ChatRequest& request) override;

private:
    UpstreamEndpoint endpoint_;
    std::string api_key_;
};

/// Cloud Translation v2 client; the key travels as a request header.
class HttpTranslationProvider final : public translator::TranslationProvider {
public:
    HttpTranslationProvider(UpstreamEndpoint endpoint, std::string api_key);
    std::string translate(Language source, std::string_view target, std::string_view text) override;

private:
    UpstreamEndpoint endpoint_;
    std::string api_key_;
};

/// Labor-market data client. "{userId}" in request paths is replaced with
/// the account id and the token is sent as a bearer credential.
class HttpCareerClient final : public career::CareerDataClient {
public:
    HttpCareerClient(UpstreamEndpoint endpoint, std::string user_id, std::string token);
    career::HttpResult get(const career::RequestDescriptor& request) override;

private:
    UpstreamEndpoint endpoint_;
    std::string user_id_;
    std::string token_;
};

}  // namespace neighbor
