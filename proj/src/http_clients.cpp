#include "neighbor/http_clients.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "neighbor/error.hpp"
#include "neighbor/text.hpp"

namespace neighbor {
namespace {

httplib::Client make_client(const UpstreamEndpoint& endpoint) {
    httplib::Client cli(endpoint.base_url);
    if (!cli.is_valid()) {
        throw Error(ErrorCode::validation_error, "bad upstream base url '" + endpoint.base_url + "'");
    }
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());
    cli.set_write_timeout(secs.count(), usecs.count());
    return cli;
}

std::string transport_error(const httplib::Result& res) {
    return httplib::to_string(res.error());
}

}  // namespace

std::optional<std::string> env_secret(const char* name) {
    const char* value = std::getenv(name);
    if (value == nullptr || *value == '\0') return std::nullopt;
    return std::string(value);
}

HttpChatProvider::HttpChatProvider(UpstreamEndpoint endpoint, std::string api_key)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)) {}

std::string HttpChatProvider::send(const ChatRequest& request) {
    nlohmann::json body;
    body["model"] = request.model_id;
    std::string system = request.instructions;
    if (!request.grounding.empty()) {
        system += "\n\nReference material:\n";
        system += request.grounding;
    }
    body["messages"] = nlohmann::json::array();
    body["messages"].push_back({{"role", "system"}, {"content", system}});
    for (const auto& m : request.messages) {
        body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.text}});
    }

    auto cli = make_client(endpoint_);
    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
    auto res = cli.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!res) throw Error(ErrorCode::provider_failure, "chat provider unreachable: " + transport_error(res));
    if (res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::provider_failure,
                    "chat provider returned HTTP " + std::to_string(res->status));
    }
    try {
        auto reply = nlohmann::json::parse(res->body);
        return reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::provider_failure, "chat provider reply has no message content");
    }
}

HttpTranslationProvider::HttpTranslationProvider(UpstreamEndpoint endpoint, std::string api_key)
    : endpoint_(std::move(endpoint)), api_key_(std::move(api_key)) {}

std::string HttpTranslationProvider::translate(Language source, std::string_view target,
                                               std::string_view text) {
    nlohmann::json body{{"q", std::string(text)},
                        {"source", to_string(source)},
                        {"target", std::string(target)},
                        {"format", "text"}};
    auto cli = make_client(endpoint_);
    httplib::Headers headers{{"X-Goog-Api-Key", api_key_}};
    auto res = cli.Post("/language/translate/v2", headers, body.dump(), "application/json");
    if (!res) {
        throw Error(ErrorCode::translation_unavailable,
                    "translation provider unreachable: " + transport_error(res));
    }
    if (res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::translation_unavailable,
                    "translation provider returned HTTP " + std::to_string(res->status));
    }
    try {
        auto reply = nlohmann::json::parse(res->body);
        return reply.at("data").at("translations").at(0).at("translatedText").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::translation_unavailable, "translation reply has no translated text");
    }
}

HttpCareerClient::HttpCareerClient(UpstreamEndpoint endpoint, std::string user_id, std::string token)
    : endpoint_(std::move(endpoint)), user_id_(std::move(user_id)), token_(std::move(token)) {}

career::HttpResult HttpCareerClient::get(const career::RequestDescriptor& request) {
    std::string path = request.path;
    constexpr std::string_view kUser = "{userId}";
    if (auto pos = path.find(kUser); pos != std::string::npos) {
        path.replace(pos, kUser.size(), text::percent_encode(user_id_));
    }
    if (!request.query.empty()) {
        char sep = '?';
        for (const auto& [k, v] : request.query) {
            path += sep;
            path += text::percent_encode(k) + "=" + text::percent_encode(v);
            sep = '&';
        }
    }
    auto cli = make_client(endpoint_);
    httplib::Headers headers{{"Authorization", "Bearer " + token_},
                             {"Accept", "application/json"}};
    auto res = cli.Get(path, headers);
    if (!res) {
        throw Error(ErrorCode::network_error, "career data service unreachable: " + transport_error(res));
    }
    return {res->status, res->body};
}

}  // namespace neighbor
