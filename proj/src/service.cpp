#include "neighbor/service.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <set>

#include <httplib.h>

#include "neighbor/assistant.hpp"
#include "neighbor/content.hpp"
#include "neighbor/http_clients.hpp"
#include "neighbor/ids.hpp"
#include "neighbor/interview.hpp"
#include "neighbor/language.hpp"
#include "neighbor/metrics.hpp"
#include "neighbor/qa_corpus.hpp"
#include "neighbor/text.hpp"

namespace neighbor::service {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kJson = "application/json";

std::string resolve_path(const json& j, const char* key, const fs::path& base) {
    auto it = j.find(key);
    if (it == j.end()) return {};
    fs::path p(it->get<std::string>());
    return (p.is_absolute() ? p : base / p).lexically_normal().string();
}

bool executable_available(const std::string& command) {
    if (command.empty()) return false;
    if (command.find('/') != std::string::npos) return ::access(command.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    if (path == nullptr) return false;
    for (const auto& dir : text::split(path, ':')) {
        if (dir.empty()) continue;
        if (::access((fs::path(dir) / command).c_str(), X_OK) == 0) return true;
    }
    return false;
}

std::string_view message_key(ErrorCode code) {
    switch (http_status(code)) {
        case 404: return "error.not_found";
        case 409: return "error.conflict";
        case 413: return "error.too_large";
        case 502: return "error.upstream";
        case 503: return "error.unavailable";
        case 500: return "error.internal";
        default: break;
    }
    return code == ErrorCode::unsupported_language ? "error.unsupported_language"
                                                   : "error.invalid_request";
}

ErrorCode code_for_status(int status) {
    switch (status) {
        case 404: return ErrorCode::not_found;
        case 413: return ErrorCode::payload_too_large;
        case 503: return ErrorCode::unavailable;
        case 500: return ErrorCode::io_error;
        default: return ErrorCode::validation_error;
    }
}

json dataset_json(const career::CareerDataset& d) {
    json j;
    j["kind"] = d.kind;
    j["columns"] = d.columns;
    j["rows"] = d.rows;
    j["fetched_at"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                          d.fetched_at.time_since_epoch())
                          .count();
    j["cache_key"] = d.cache_key;
    return j;
}

json chat_session_json(const ChatSession& s) {
    json j{{"session_id", s.session_id},
           {"language", to_string(s.language_pref)},
           {"profile", to_string(s.profile)},
           {"history", json::array()}};
    for (const auto& h : s.history) {
        j["history"].push_back({{"role", to_string(h.role)}, {"text", h.text}});
    }
    return j;
}

json feedback_json(const interview::TurnFeedback& f) {
    return {{"available", f.available},
            {"clarity", f.clarity},
            {"confidence", f.confidence},
            {"completeness", f.completeness},
            {"notes", f.notes}};
}

}  // namespace

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::unknown_id:
        case ErrorCode::unknown_category:
        case ErrorCode::unknown_section:
        case ErrorCode::unknown_occupation:
        case ErrorCode::unknown_question:
        case ErrorCode::unknown_session:
        case ErrorCode::not_found:
            return 404;
        case ErrorCode::session_ended:
        case ErrorCode::no_turns:
            return 409;
        case ErrorCode::payload_too_large:
            return 413;
        case ErrorCode::unreadable_pdf:
        case ErrorCode::empty_text:
            return 422;
        case ErrorCode::upstream_status:
        case ErrorCode::unparseable_body:
        case ErrorCode::engine_failure:
            return 502;
        case ErrorCode::provider_failure:
        case ErrorCode::translation_unavailable:
        case ErrorCode::network_error:
        case ErrorCode::unavailable:
            return 503;
        case ErrorCode::duplicate_id:
        case ErrorCode::missing_variant:
        case ErrorCode::missing_audio:
        case ErrorCode::io_error:
            return 500;
        case ErrorCode::parse_error:
        case ErrorCode::empty_field:
        case ErrorCode::unsupported_language:
        case ErrorCode::unknown_version:
        case ErrorCode::empty_message:
        case ErrorCode::invalid_url:
        case ErrorCode::validation_error:
        case ErrorCode::over_length:
        case ErrorCode::missing_parameter:
        case ErrorCode::extra_parameter:
        case ErrorCode::malformed_location:
        case ErrorCode::empty_transcript:
        case ErrorCode::schema_violation:
        case ErrorCode::pii_rejected:
            return 400;
    }
    return 500;
}

// ---- configuration ---------------------------------------------------------

ServiceConfig ServiceConfig::with_data_dir(const fs::path& data_dir) {
    ServiceConfig c;
    auto at = [&data_dir](const char* name) { return (data_dir / name).string(); };
    c.corpus_path = at("qa_corpus.jsonl");
    c.phrase_bank_path = at("phrase_bank.jsonl");
    c.faq_path = at("faq.jsonl");
    c.mindfulness_path = at("mindfulness.jsonl");
    c.messages_path = at("messages.json");
    c.occupations_path = at("occupations.tsv");
    c.question_rules_path = at("question_rules.json");
    c.interview_questions_path = at("interview_questions.jsonl");
    c.translation_fixtures_path = at("translation_fixtures.json");
    c.career_fixtures_dir = at("fixtures/career");
    return c;
}

ServiceConfig ServiceConfig::from_json(const json& j, const fs::path& base) {
    static const std::set<std::string> kKeys{
        "listen_address", "port", "data_dir", "content", "event_log", "static_dir", "web_root",
        "match_threshold", "cache_ttl_seconds", "render", "chat", "translation", "career",
        "upstream_timeout_ms", "locator_embed_template", "offline_fixtures"};
    static const std::set<std::string> kContentKeys{
        "corpus", "phrase_bank", "faq", "mindfulness", "messages", "occupations",
        "question_rules", "interview_questions", "translation_fixtures", "career_fixtures"};
    if (!j.is_object()) throw Error(ErrorCode::parse_error, "config must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (!kKeys.contains(k)) throw Error(ErrorCode::parse_error, "unknown config key '" + k + "'");
    }
    try {
        ServiceConfig c;
        if (j.contains("data_dir")) c = with_data_dir(resolve_path(j, "data_dir", base));
        if (auto it = j.find("content"); it != j.end()) {
            for (const auto& [k, v] : it->items()) {
                if (!kContentKeys.contains(k)) {
                    throw Error(ErrorCode::parse_error, "unknown content key '" + k + "'");
                }
            }
            const json& ct = *it;
            auto set = [&](const char* key, std::string& field) {
                if (auto p = resolve_path(ct, key, base); !p.empty()) field = p;
            };
            set("corpus", c.corpus_path);
            set("phrase_bank", c.phrase_bank_path);
            set("faq", c.faq_path);
            set("mindfulness", c.mindfulness_path);
            set("messages", c.messages_path);
            set("occupations", c.occupations_path);
            set("question_rules", c.question_rules_path);
            set("interview_questions", c.interview_questions_path);
            set("translation_fixtures", c.translation_fixtures_path);
            set("career_fixtures", c.career_fixtures_dir);
        }
        c.listen_address = j.value("listen_address", c.listen_address);
        c.port = j.value("port", c.port);
        c.event_log_path = resolve_path(j, "event_log", base);
        c.static_dir = resolve_path(j, "static_dir", base);
        c.web_root = resolve_path(j, "web_root", base);
        c.match_threshold = j.value("match_threshold", c.match_threshold);
        c.cache_ttl = std::chrono::seconds(j.value("cache_ttl_seconds", c.cache_ttl.count()));
        c.upstream_timeout =
            std::chrono::milliseconds(j.value("upstream_timeout_ms", c.upstream_timeout.count()));
        c.locator_embed_template = j.value("locator_embed_template", c.locator_embed_template);
        c.offline_fixtures = j.value("offline_fixtures", false);
        if (auto it = j.find("render"); it != j.end()) {
            c.render_command = it->value("command", std::vector<std::string>{});
            if (!c.render_command.empty() && c.render_command[0].find('/') != std::string::npos) {
                fs::path exe(c.render_command[0]);
                if (exe.is_relative()) c.render_command[0] = (base / exe).lexically_normal().string();
            }
            c.render_timeout =
                std::chrono::milliseconds(it->value("timeout_ms", c.render_timeout.count()));
            c.max_concurrent_renders = it->value("max_concurrent", c.max_concurrent_renders);
        }
        if (auto it = j.find("chat"); it != j.end()) {
            c.chat_base_url = it->value("base_url", c.chat_base_url);
            c.model_id = it->value("model_id", c.model_id);
        }
        if (auto it = j.find("translation"); it != j.end()) {
            c.translation_base_url = it->value("base_url", c.translation_base_url);
        }
        if (auto it = j.find("career"); it != j.end()) {
            c.career_base_url = it->value("base_url", c.career_base_url);
        }
        if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::validation_error, "port out of range");
        if (c.max_concurrent_renders < 1) {
            throw Error(ErrorCode::validation_error, "render.max_concurrent must be at least 1");
        }
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::parse_error, std::string("config: ") + e.what());
    }
}

ServiceConfig ServiceConfig::load(const std::string& path) {
    json j;
    try {
        j = json::parse(text::read_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::parse_error, "config '" + path + "': " + e.what());
    }
    return from_json(j, fs::absolute(path).parent_path());
}

Credentials Credentials::from_env() {
    return {env_secret(kChatKeyEnv), env_secret(kTranslationKeyEnv), env_secret(kCareerTokenEnv),
            env_secret(kCareerUserEnv)};
}

Providers make_providers(const ServiceConfig& config, const Credentials& creds) {
    Providers p;
    if (config.offline_fixtures) {
        p.chat = std::make_shared<MockChatProvider>();
        p.translation.reset(new translator::RecordedTranslationProvider(
            translator::RecordedTranslationProvider::from_file(config.translation_fixtures_path)));
        if (!fs::is_directory(config.career_fixtures_dir)) {
            throw Error(ErrorCode::io_error,
                        "career fixture directory '" + config.career_fixtures_dir + "' not found");
        }
        p.career = std::make_shared<career::FixtureCareerClient>(config.career_fixtures_dir);
        p.chat_status = p.translation_status = p.career_status = "offline-fixtures";
    } else {
        UpstreamEndpoint chat{config.chat_base_url, config.upstream_timeout};
        UpstreamEndpoint translation{config.translation_base_url, config.upstream_timeout};
        UpstreamEndpoint career{config.career_base_url, config.upstream_timeout};
        if (creds.chat_api_key) {
            p.chat = std::make_shared<HttpChatProvider>(chat, *creds.chat_api_key);
        }
        if (creds.translation_api_key) {
            p.translation =
                std::make_shared<HttpTranslationProvider>(translation, *creds.translation_api_key);
        }
        if (creds.career_token && creds.career_user_id) {
            p.career = std::make_shared<HttpCareerClient>(career, *creds.career_user_id,
                                                          *creds.career_token);
        }
        p.chat_status = p.chat ? "up" : "degraded";
        p.translation_status = p.translation ? "up" : "degraded";
        p.career_status = p.career ? "up" : "degraded";
    }
    if (!config.render_command.empty() && executable_available(config.render_command[0])) {
        resume::ProcessEngineConfig engine;
        engine.command = config.render_command;
        engine.timeout = config.render_timeout;
        engine.max_concurrent = config.max_concurrent_renders;
        p.render = std::make_shared<resume::ProcessRenderEngine>(std::move(engine));
        p.render_status = "up";
    } else {
        p.render_status = "degraded";
    }
    return p;
}

// ---- service ---------------------------------------------------------------

struct Service::Impl {
    ServiceConfig config;
    Providers providers;

    std::shared_ptr<const qa::QACorpus> corpus;
    std::unique_ptr<Assistant> assistant;
    translator::PhraseBank phrases;
    std::unique_ptr<content::ContentStore> content;
    career::OccupationCatalog occupations;
    career::CareerCache career_cache;
    std::unique_ptr<interview::Coach> coach;
    metrics::QuestionClassifier classifier;
    std::unique_ptr<metrics::EventLog> events;
    fs::path scratch_log_dir;

    httplib::Server server;
    std::atomic<int> bound_port{-1};

    Impl(ServiceConfig c, Providers p)
        : config(std::move(c)),
          providers(std::move(p)),
          career_cache(config.cache_ttl) {}

    Language request_language(const httplib::Request& req) const {
        if (req.has_param("lang")) {
            if (auto l = try_parse_language(req.get_param_value("lang"))) return *l;
        }
        return Language::en;
    }

    void send_error(const httplib::Request& req, httplib::Response& res, ErrorCode code,
                    const std::string& detail) const {
        res.status = http_status(code);
        json body;
        body["error"] = {{"code", to_string(code)},
                         {"message", content->messages().lookup(message_key(code), request_language(req))},
                         {"detail", detail}};
        body["request_id"] = res.get_header_value("X-Request-Id");
        res.set_content(body.dump(), std::string(kJson));
    }

    static void send_json(httplib::Response& res, const json& body, int status = 200) {
        res.status = status;
        res.set_content(body.dump(), std::string(kJson));
    }

    static json json_body(const httplib::Request& req) {
        json j;
        try {
            j = json::parse(req.body);
        } catch (const json::parse_error&) {
            throw Error(ErrorCode::parse_error, "request body is not valid JSON");
        }
        if (!j.is_object()) throw Error(ErrorCode::parse_error, "request body must be a JSON object");
        return j;
    }

    static std::string string_field(const json& j, const char* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) {
            throw Error(ErrorCode::validation_error, std::string("'") + key + "' must be a string");
        }
        return it->get<std::string>();
    }

    static std::string required_param(const httplib::Request& req, const char* key) {
        if (!req.has_param(key)) {
            throw Error(ErrorCode::validation_error, std::string("query parameter '") + key + "' is required");
        }
        return req.get_param_value(key);
    }

    template <class Fn>
    httplib::Server::Handler guard(Fn fn) {
        return [this, fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const Error& e) {
                send_error(req, res, e.code(), e.what());
            } catch (const std::exception&) {
                send_error(req, res, ErrorCode::io_error, "internal error");
            }
        };
    }

    void load_content() {
        corpus = std::make_shared<const qa::QACorpus>(qa::load_corpus(config.corpus_path));
        AssistantConfig ac;
        ac.model_id = config.model_id;
        ac.match_threshold = config.match_threshold;
        assistant = std::make_unique<Assistant>(corpus, providers.chat, ac);
        phrases = translator::load_phrase_bank(config.phrase_bank_path);
        content = std::make_unique<content::ContentStore>(content::ContentStore::load(
            config.faq_path, config.mindfulness_path, config.messages_path));
        occupations = career::OccupationCatalog::load(config.occupations_path);
        coach = std::make_unique<interview::Coach>(
            interview::QuestionBank::load(config.interview_questions_path), providers.chat,
            config.model_id);
        classifier = metrics::QuestionClassifier::load(config.question_rules_path);

        std::string log_path = config.event_log_path;
        if (log_path.empty()) {
            scratch_log_dir = fs::temp_directory_path() / ("neighbor-events-" + random_uuid());
            fs::create_directories(scratch_log_dir);
            log_path = (scratch_log_dir / "events.log").string();
        } else if (auto parent = fs::path(log_path).parent_path(); !parent.empty()) {
            fs::create_directories(parent);
        }
        events = std::make_unique<metrics::EventLog>(log_path);
    }

    json health() const {
        json components{{"content", "up"},
                        {"assistant", "up"},
                        {"chat", providers.chat_status},
                        {"translation", providers.translation_status},
                        {"career", providers.career_status},
                        {"render", providers.render_status},
                        {"metrics", "up"}};
        return {{"status", "up"},
                {"mode", config.offline_fixtures ? "offline-fixtures" : "live"},
                {"components", components}};
    }

    void routes();
    void chat_routes();
    void content_routes();
    void career_routes();
    void resume_routes();
    void interview_routes();
    void metrics_routes();
};

void Service::Impl::routes() {
    server.set_payload_max_length(resume::kMaxUploadBytes + 256 * 1024);
    server.set_pre_routing_handler([](const httplib::Request&, httplib::Response& res) {
        res.set_header("X-Request-Id", random_uuid());
        return httplib::Server::HandlerResponse::Unhandled;
    });
    server.set_error_handler([this](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        if (!res.has_header("X-Request-Id")) res.set_header("X-Request-Id", random_uuid());
        int status = res.status;
        send_error(req, res, code_for_status(status), "no such resource");
        res.status = status;
    });
    server.set_exception_handler(
        [this](const httplib::Request& req, httplib::Response& res, std::exception_ptr) {
            send_error(req, res, ErrorCode::io_error, "internal error");
        });

    server.Get("/healthz", guard([this](const httplib::Request&, httplib::Response& res) {
                   send_json(res, health());
               }));

    chat_routes();
    content_routes();
    career_routes();
    resume_routes();
    interview_routes();
    metrics_routes();

    if (!config.static_dir.empty()) server.set_mount_point("/assets", config.static_dir);
    if (!config.web_root.empty()) server.set_mount_point("/", config.web_root);
}

void Service::Impl::chat_routes() {
    server.Post("/api/chat/session", guard([this](const httplib::Request& req, httplib::Response& res) {
                    std::string lang = "en";
                    if (!req.body.empty()) {
                        auto body = json_body(req);
                        if (body.contains("lang")) lang = string_field(body, "lang");
                    }
                    send_json(res, chat_session_json(assistant->create_session(lang)), 201);
                }));
    server.Get(R"(/api/chat/([^/]+))", guard([this](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, chat_session_json(assistant->session(req.matches[1].str())));
               }));
    server.Post(R"(/api/chat/([^/]+)/message)",
                guard([this](const httplib::Request& req, httplib::Response& res) {
                    auto body = json_body(req);
                    auto text = string_field(body, "text");
                    auto reply = assistant->handle_message(req.matches[1].str(), text);
                    json out{{"reply", reply.text},
                             {"source", to_string(reply.source)},
                             {"matched_pair", reply.matched_pair ? json(*reply.matched_pair) : json(nullptr)},
                             {"category", metrics::slug(classifier.classify(text))}};
                    send_json(res, out);
                }));
    server.Put(R"(/api/chat/([^/]+)/profile)",
               guard([this](const httplib::Request& req, httplib::Response& res) {
                   auto body = json_body(req);
                   auto s = assistant->set_profile(req.matches[1].str(), string_field(body, "version"));
                   send_json(res, chat_session_json(s));
               }));
}

void Service::Impl::content_routes() {
    server.Get("/api/faq", guard([this](const httplib::Request& req, httplib::Response& res) {
                   if (!req.has_param("category")) {
                       send_json(res, {{"categories", content::kFaqCategories}});
                       return;
                   }
                   auto lang = req.has_param("lang") ? req.get_param_value("lang") : "en";
                   auto category = req.get_param_value("category");
                   json entries = json::array();
                   for (const auto& e : content->list_faq(category, lang)) {
                       entries.push_back({{"id", e.entry_id}, {"question", e.question}, {"answer", e.answer}});
                   }
                   send_json(res, {{"category", category}, {"lang", lang}, {"entries", entries}});
               }));
    server.Get("/api/mindfulness", guard([this](const httplib::Request& req, httplib::Response& res) {
                   if (!req.has_param("section")) {
                       send_json(res, {{"sections", content::kMindfulnessSections}});
                       return;
                   }
                   auto lang = req.has_param("lang") ? req.get_param_value("lang") : "en";
                   auto section = req.get_param_value("section");
                   json items = json::array();
                   for (const auto& m : content->list_mindfulness(section, lang)) {
                       json item{{"id", m.item_id}, {"kind", content::to_string(m.kind)}, {"title", m.title}};
                       if (m.kind == content::MindfulnessKind::embedded_video) {
                           item["video_url"] = m.video_url;
                       } else {
                           item["body"] = m.body;
                       }
                       items.push_back(std::move(item));
                   }
                   send_json(res, {{"section", section}, {"lang", lang}, {"items", items}});
               }));
    server.Get("/api/phrases", guard([this](const httplib::Request& req, httplib::Response& res) {
                   if (!req.has_param("category")) {
                       send_json(res, {{"categories", phrases.categories}});
                       return;
                   }
                   auto lang = req.has_param("lang") ? req.get_param_value("lang") : "en";
                   auto category = req.get_param_value("category");
                   json items = json::array();
                   for (const auto& p : translator::get_phrases(phrases, category, lang)) {
                       items.push_back({{"id", p.phrase_id}, {"text", p.text}, {"audio", "/assets/" + p.audio}});
                   }
                   send_json(res, {{"category", category}, {"lang", lang}, {"items", items}});
               }));
    server.Post("/api/translate", guard([this](const httplib::Request& req, httplib::Response& res) {
                    auto body = json_body(req);
                    translator::TranslationRequest tr;
                    tr.source_lang = parse_language(string_field(body, "source_lang"));
                    tr.text = string_field(body, "text");
                    translator::validate(tr);
                    if (!providers.translation) {
                        throw Error(ErrorCode::unavailable, "translation provider is not configured");
                    }
                    auto english = translator::translate_to_english(*providers.translation, tr);
                    send_json(res, {{"source_lang", to_string(tr.source_lang)},
                                    {"target_lang", "en"},
                                    {"translation", english}});
                }));
    server.Get("/api/locator", guard([this](const httplib::Request& req, httplib::Response& res) {
                   if (!req.has_param("category")) {
                       json cats = json::array();
                       for (const auto& c : content::kLocatorCategories) {
                           cats.push_back({{"name", c.name}, {"slug", c.slug}});
                       }
                       send_json(res, {{"categories", cats}});
                       return;
                   }
                   auto category = req.get_param_value("category");
                   auto url = config.locator_embed_template.empty()
                                  ? content::locator_query(category)
                                  : content::locator_query(category, config.locator_embed_template);
                   send_json(res, {{"category", category}, {"embed_url", url}});
               }));
}

void Service::Impl::career_routes() {
    server.Get("/api/career/occupations", guard([this](const httplib::Request&, httplib::Response& res) {
                   json list = json::array();
                   for (const auto& o : occupations.entries()) {
                       list.push_back({{"display_name", o.display_name}, {"onet_code", o.onet_code}});
                   }
                   send_json(res, {{"occupations", list}});
               }));
    server.Get("/api/career/kinds", guard([](const httplib::Request&, httplib::Response& res) {
                   json list = json::array();
                   for (const auto& k : career::query_kinds()) {
                       list.push_back({{"slug", k.slug}, {"title", k.title}});
                   }
                   send_json(res, {{"kinds", list}});
               }));
    server.Get(R"(/api/career/([a-z-]+))", guard([this](const httplib::Request& req, httplib::Response& res) {
                   const auto& kind = career::find_kind(req.matches[1].str());
                   std::map<std::string, std::string> fields;
                   for (const auto& [k, v] : req.params) {
                       if (k == "lang") continue;
                       if (!fields.emplace(k, v).second) {
                           throw Error(ErrorCode::validation_error, "parameter '" + k + "' given twice");
                       }
                   }
                   auto params = career::params_from_fields(kind.kind, fields, &occupations);
                   // Validate before the provider check so bad input is a 400 even when degraded.
                   career::build_request(kind.kind, params);
                   if (!providers.career) {
                       throw Error(ErrorCode::unavailable, "career data provider is not configured");
                   }
                   auto dataset = career::fetch(kind.kind, params, *providers.career, career_cache);
                   auto out = dataset_json(dataset);
                   out["kind"] = kind.slug;
                   out["title"] = kind.title;
                   send_json(res, out);
               }));
}

void Service::Impl::resume_routes() {
    server.Post("/api/resume/build", guard([this](const httplib::Request& req, httplib::Response& res) {
                    auto input = resume::parse_resume_input(json_body(req));
                    resume::validate(input);
                    if (!providers.render) {
                        throw Error(ErrorCode::unavailable, "render engine is not configured");
                    }
                    auto bytes = resume::build_resume(input, *providers.render);
                    res.set_header("Content-Disposition", "attachment; filename=\"resume.pdf\"");
                    res.set_content(bytes, "application/pdf");
                }));
    server.Post("/api/resume/yaml", guard([](const httplib::Request& req, httplib::Response& res) {
                    auto input = resume::parse_resume_input(json_body(req));
                    resume::validate(input);
                    res.set_content(resume::map_to_render_schema(input).to_yaml(), "application/yaml");
                }));
    server.Post("/api/resume/review", guard([this](const httplib::Request& req, httplib::Response& res) {
                    std::string upload;
                    std::string_view pdf = req.body;
                    if (req.is_multipart_form_data()) {
                        if (!req.has_file("file")) {
                            throw Error(ErrorCode::validation_error, "multipart upload needs a 'file' part");
                        }
                        upload = req.get_file_value("file").content;
                        pdf = upload;
                    }
                    if (!providers.chat) {
                        throw Error(ErrorCode::unavailable, "chat provider is not configured");
                    }
                    auto report = resume::review_resume(pdf, *providers.chat, config.model_id);
                    send_json(res, report.to_json());
                }));
}

void Service::Impl::interview_routes() {
    server.Get("/api/interview/questions", guard([this](const httplib::Request&, httplib::Response& res) {
                   json list = json::array();
                   for (const auto& q : coach->bank().questions()) {
                       list.push_back({{"id", q.id}, {"text", q.text}});
                   }
                   send_json(res, {{"questions", list}});
               }));
    server.Post("/api/interview/session", guard([this](const httplib::Request& req, httplib::Response& res) {
                    auto body = json_body(req);
                    send_json(res, coach->start(string_field(body, "question_id")).to_json(), 201);
                }));
    server.Get(R"(/api/interview/session/([^/]+))",
               guard([this](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, coach->session(req.matches[1].str()).to_json());
               }));
    server.Post(R"(/api/interview/session/([^/]+)/turn)",
                guard([this](const httplib::Request& req, httplib::Response& res) {
                    auto body = json_body(req);
                    auto id = req.matches[1].str();
                    auto feedback = coach->submit_turn(id, string_field(body, "transcript"));
                    auto session = coach->session(id);
                    send_json(res, {{"feedback", feedback_json(feedback)},
                                    {"turn", session.turns.size()},
                                    {"session", session.to_json()}});
                }));
    server.Post(R"(/api/interview/session/([^/]+)/end)",
                guard([this](const httplib::Request& req, httplib::Response& res) {
                    auto id = req.matches[1].str();
                    coach->end(id);
                    send_json(res, coach->session(id).to_json());
                }));
}

void Service::Impl::metrics_routes() {
    server.Post("/api/metrics/session", guard([](const httplib::Request&, httplib::Response& res) {
                    send_json(res, {{"session_id", metrics::new_session_id()}}, 201);
                }));
    server.Post("/api/metrics/event", guard([this](const httplib::Request& req, httplib::Response& res) {
                    json body;
                    try {
                        body = json::parse(req.body);
                    } catch (const json::parse_error&) {
                        throw Error(ErrorCode::schema_violation, "event body is not valid JSON");
                    }
                    events->record(metrics::event_from_json(body));
                    send_json(res, {{"accepted", true}}, 202);
                }));
    server.Get("/api/metrics/report", guard([this](const httplib::Request& req, httplib::Response& res) {
                   auto report = events->aggregate();
                   if (req.has_param("format") && req.get_param_value("format") == "text") {
                       res.set_content(report.to_text(), "text/plain; charset=utf-8");
                   } else {
                       res.set_content(report.to_json().dump(), std::string(kJson));
                   }
               }));
    server.Post("/api/metrics/classify", guard([this](const httplib::Request& req, httplib::Response& res) {
                    auto category = classifier.classify(string_field(json_body(req), "text"));
                    send_json(res, {{"category", metrics::slug(category)},
                                    {"display_name", metrics::display_name(category)}});
                }));
}

Service::Service(ServiceConfig config, Providers providers)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(providers))) {
    impl_->load_content();
    impl_->routes();
}

Service::~Service() {
    stop();
    if (!impl_->scratch_log_dir.empty()) {
        impl_->events.reset();
        std::error_code ec;
        fs::remove_all(impl_->scratch_log_dir, ec);
    }
}

int Service::bind() {
    int port = impl_->config.port == 0
                   ? impl_->server.bind_to_any_port(impl_->config.listen_address)
                   : (impl_->server.bind_to_port(impl_->config.listen_address, impl_->config.port)
                          ? impl_->config.port
                          : -1);
    if (port < 0) {
        throw Error(ErrorCode::io_error, "cannot listen on " + impl_->config.listen_address + ":" +
                                             std::to_string(impl_->config.port));
    }
    impl_->bound_port = port;
    return port;
}

void Service::run() {
    if (impl_->bound_port < 0) throw Error(ErrorCode::io_error, "service is not bound");
    impl_->server.listen_after_bind();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

void Service::stop() { impl_->server.stop(); }

nlohmann::json Service::health() const { return impl_->health(); }

}  // namespace neighbor::service
