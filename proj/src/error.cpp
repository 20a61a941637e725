#include "neighbor/error.hpp"

namespace neighbor {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::duplicate_id: return "duplicate_id";
        case ErrorCode::empty_field: return "empty_field";
        case ErrorCode::unknown_id: return "unknown_id";
        case ErrorCode::unsupported_language: return "unsupported_language";
        case ErrorCode::unknown_version: return "unknown_version";
        case ErrorCode::empty_message: return "empty_message";
        case ErrorCode::unknown_category: return "unknown_category";
        case ErrorCode::unknown_section: return "unknown_section";
        case ErrorCode::missing_variant: return "missing_variant";
        case ErrorCode::missing_audio: return "missing_audio";
        case ErrorCode::invalid_url: return "invalid_url";
        case ErrorCode::validation_error: return "validation_error";
        case ErrorCode::over_length: return "over_length";
        case ErrorCode::translation_unavailable: return "translation_unavailable";
        case ErrorCode::provider_failure: return "provider_failure";
        case ErrorCode::unknown_occupation: return "unknown_occupation";
        case ErrorCode::missing_parameter: return "missing_parameter";
        case ErrorCode::extra_parameter: return "extra_parameter";
        case ErrorCode::malformed_location: return "malformed_location";
        case ErrorCode::network_error: return "network_error";
        case ErrorCode::upstream_status: return "upstream_status";
        case ErrorCode::unparseable_body: return "unparseable_body";
        case ErrorCode::engine_failure: return "engine_failure";
        case ErrorCode::unreadable_pdf: return "unreadable_pdf";
        case ErrorCode::empty_text: return "empty_text";
        case ErrorCode::payload_too_large: return "payload_too_large";
        case ErrorCode::unknown_question: return "unknown_question";
        case ErrorCode::session_ended: return "session_ended";
        case ErrorCode::empty_transcript: return "empty_transcript";
        case ErrorCode::no_turns: return "no_turns";
        case ErrorCode::unknown_session: return "unknown_session";
        case ErrorCode::schema_violation: return "schema_violation";
        case ErrorCode::pii_rejected: return "pii_rejected";
        case ErrorCode::io_error: return "io_error";
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::unavailable: return "unavailable";
    }
    return "unknown";
}

}  // namespace neighbor
