#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace neighbor {

/// Machine-readable failure classes shared by every module. The service layer
/// maps each one onto an HTTP status and a localized message.
enum class ErrorCode {
    parse_error,
    duplicate_id,
    empty_field,
    unknown_id,
    unsupported_language,
    unknown_version,
    empty_message,
    unknown_category,
    unknown_section,
    missing_variant,
    missing_audio,
    invalid_url,
    validation_error,
    over_length,
    translation_unavailable,
    provider_failure,
    unknown_occupation,
    missing_parameter,
    extra_parameter,
    malformed_location,
    network_error,
    upstream_status,
    unparseable_body,
    engine_failure,
    unreadable_pdf,
    empty_text,
    payload_too_large,
    unknown_question,
    session_ended,
    empty_transcript,
    no_turns,
    unknown_session,
    schema_violation,
    pii_rejected,
    io_error,
    not_found,
    unavailable,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace neighbor
