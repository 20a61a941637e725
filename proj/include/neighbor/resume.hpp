#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "neighbor/chat_provider.hpp"
#include "neighbor/error.hpp"
#include "neighbor/pdf.hpp"

namespace neighbor::resume {

// ---- input -----------------------------------------------------------------

struct Personal {
    std::string name;
    std::string phone;
    std::string email;
    std::string location;
};

struct Education {
    std::string institution;
    std::string credential;
    std::string dates;
};

struct Experience {
    std::string employer;
    std::string title;
    std::string dates;
    std::vector<std::string> bullets;
};

struct Certification {
    std::string name;
    std::string issuer;
    std::string date;
};

struct ResumeInput {
    Personal personal;
    std::vector<Education> education;
    std::vector<Experience> experience;
    std::vector<Certification> certifications;
    std::vector<std::string> skills;
};

// Strict: unknown keys and wrong types are Error{validation_error}, as is a
// blank name.
ResumeInput parse_resume_input(const nlohmann::json& j);
nlohmann::json to_json(const ResumeInput& input);
void validate(const ResumeInput& input);

// Every non-empty string in the input, in document order.
std::vector<std::string> input_strings(const ResumeInput& input);

// ---- render document -------------------------------------------------------

struct RenderEntry {
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<std::string> highlights;
};

struct RenderSection {
    std::string key;
    std::vector<RenderEntry> entries;
};

/// Document in the render engine's schema: a `cv` block with contact fields
/// and named sections, plus a `design` block selecting the theme.
struct RenderDocument {
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<RenderSection> sections;
    std::string theme = "classic";

    // Deterministic YAML: fixed key order, every string double-quoted.
    std::string to_yaml() const;
};

RenderDocument map_to_render_schema(const ResumeInput& input);

// Text lines for a page, laid out from a document in the render schema.
// Throws Error{validation_error} when the YAML lacks cv.name.
std::vector<pdf::TextLine> layout_render_yaml(std::string_view yaml);

// ---- render engine ---------------------------------------------------------

class RenderFailure : public Error {
public:
    RenderFailure(const std::string& message, std::string diagnostics, int exit_status)
        : Error(ErrorCode::engine_failure, message),
          diagnostics_(std::move(diagnostics)),
          exit_status_(exit_status) {}

    const std::string& diagnostics() const noexcept { return diagnostics_; }
    int exit_status() const noexcept { return exit_status_; }

private:
    std::string diagnostics_;
    int exit_status_;
};

class RenderEngine {
public:
    virtual ~RenderEngine() = default;
    // Returns PDF bytes. Throws RenderFailure.
    virtual std::string render(std::string_view document_yaml) = 0;
};

struct ProcessEngineConfig {
    // argv; "{input}" and "{output_dir}" are substituted per invocation.
    std::vector<std::string> command;
    std::chrono::milliseconds timeout{60000};
    std::ptrdiff_t max_concurrent = 2;
    std::string work_root;  // empty: system temp directory
};

/// Runs an external engine in a fresh working directory per call, feeding it
/// the document as a file and collecting the PDF it writes. Output on stdout
/// and stderr is kept as diagnostics. At most `max_concurrent` renders run at
/// once; further callers wait.
class ProcessRenderEngine final : public RenderEngine {
public:
    explicit ProcessRenderEngine(ProcessEngineConfig config);
    std::string render(std::string_view document_yaml) override;

private:
    ProcessEngineConfig config_;
    std::counting_semaphore<1024> slots_;
};

// Throws Error{validation_error} or RenderFailure.
std::string build_resume(const ResumeInput& input, RenderEngine& engine);

// ---- review ----------------------------------------------------------------

inline constexpr std::size_t kMaxUploadBytes = 5 * 1024 * 1024;

struct ReviewReport {
    std::vector<std::string> strengths;
    std::vector<std::string> weaknesses;
    std::vector<std::string> improvements;

    nlohmann::json to_json() const;
};

std::string_view review_instructions();

// Splits a reply on Strengths / Weaknesses / Improvements headers. Items that
// present a score are dropped. A reply with no recognisable sections becomes a
// single improvements item.
ReviewReport parse_review(std::string_view reply);

bool looks_like_score(std::string_view item);

// Errors: payload_too_large, unreadable_pdf, empty_text, provider_failure.
ReviewReport review_resume(std::string_view pdf_bytes, ChatProvider& provider,
                           const std::string& model_id);

}  // namespace neighbor::resume
