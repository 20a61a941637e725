#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neighbor/career.hpp"
#include "neighbor/chat_provider.hpp"
#include "neighbor/error.hpp"
#include "neighbor/resume.hpp"
#include "neighbor/translator.hpp"

namespace neighbor::service {

struct ServiceConfig {
    std::string listen_address = "127.0.0.1";
    int port = 8080;  // 0 picks a free port

    std::string corpus_path;
    std::string phrase_bank_path;
    std::string faq_path;
    std::string mindfulness_path;
    std::string messages_path;
    std::string occupations_path;
    std::string question_rules_path;
    std::string interview_questions_path;
    std::string translation_fixtures_path;
    std::string career_fixtures_dir;
    std::string event_log_path;
    std::string static_dir;  // served under /assets when set
    std::string web_root;    // served under / when set

    double match_threshold = 0.75;
    std::chrono::seconds cache_ttl{24 * 3600};

    std::vector<std::string> render_command;
    std::chrono::milliseconds render_timeout{60000};
    int max_concurrent_renders = 2;

    std::string model_id = "gpt-4o-11-20-2024";
    std::string chat_base_url = "https://api.openai.com";
    std::string translation_base_url = "https://translation.googleapis.com";
    std::string career_base_url = "https://api.careeronestop.org";
    std::chrono::milliseconds upstream_timeout{30000};
    std::string locator_embed_template;  // empty: built-in map embed

    bool offline_fixtures = false;

    // Relative paths resolve against `base_dir`. Unknown keys are rejected.
    static ServiceConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
    static ServiceConfig load(const std::string& path);
    // Every content file under `data_dir` with its shipped name.
    static ServiceConfig with_data_dir(const std::filesystem::path& data_dir);
};

/// Provider credentials. Read from the environment only; never serialized.
struct Credentials {
    std::optional<std::string> chat_api_key;
    std::optional<std::string> translation_api_key;
    std::optional<std::string> career_token;
    std::optional<std::string> career_user_id;

    static Credentials from_env();
};

/// External collaborators. A null member leaves the matching endpoints
/// degraded.
struct Providers {
    std::shared_ptr<ChatProvider> chat;
    std::shared_ptr<translator::TranslationProvider> translation;
    std::shared_ptr<career::CareerDataClient> career;
    std::shared_ptr<resume::RenderEngine> render;
    // Readiness labels reported by /healthz, e.g. "up", "degraded", "offline-fixtures".
    std::string chat_status;
    std::string translation_status;
    std::string career_status;
    std::string render_status;
};

// Offline mode: in-process mock chat, recorded translations, career fixtures.
// Live mode: HTTP clients for whichever credentials are present.
Providers make_providers(const ServiceConfig& config, const Credentials& credentials);

int http_status(ErrorCode code) noexcept;

/// The HTTP surface. Loads all content at construction and throws
/// Error{io_error | parse_error | ...} when any file is missing or invalid.
class Service {
public:
    Service(ServiceConfig config, Providers providers);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Binds the configured address and returns the bound port.
    int bind();
    // Serves until stop(). Requires bind().
    void run();
    // Blocks until run() is accepting connections.
    void wait_until_ready() const;
    void stop();

    nlohmann::json health() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace neighbor::service
