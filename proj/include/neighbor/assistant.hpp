#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "neighbor/chat_provider.hpp"
#include "neighbor/language.hpp"
#include "neighbor/qa_corpus.hpp"

namespace neighbor {

enum class ProfileVersion { v1_0 = 0, v2_0 = 1, v3_0 = 2 };

std::string_view to_string(ProfileVersion v) noexcept;
// Accepts "1.0", "2.0", "3.0". Throws Error{unknown_version}.
ProfileVersion parse_profile_version(std::string_view s);

/// Persona and behavior prose handed to the chat provider as instructions.
struct InstructionProfile {
    ProfileVersion version;
    std::string_view text;
};

const InstructionProfile& instruction_profile(ProfileVersion version);

using Clock = std::chrono::system_clock;

struct HistoryEntry {
    Role role = Role::user;
    std::string text;
    Clock::time_point timestamp;
};

struct ChatSession {
    std::string session_id;
    std::vector<HistoryEntry> history;
    Language language_pref = Language::en;
    ProfileVersion profile = ProfileVersion::v3_0;
};

enum class ReplySource { corpus_verbatim, generated, degraded };

std::string_view to_string(ReplySource s) noexcept;

struct AssistantReply {
    std::string text;
    ReplySource source = ReplySource::generated;
    std::optional<std::string> matched_pair;
};

struct AssistantConfig {
    std::string model_id = "gpt-4o-11-20-2024";
    double match_threshold = qa::kDefaultMatchThreshold;
    ProfileVersion default_profile = ProfileVersion::v3_0;
    LocalizedText fallback_text;  // empty: built-in defaults
};

LocalizedText default_fallback_text();

/// Retrieval-first chat dispatcher. A message that matches a curated question
/// is answered with the stored answer and never reaches the provider; all
/// other messages are sent to the provider together with the instruction
/// profile, the corpus text and the session history.
///
/// Calls on one session are serialized; distinct sessions run concurrently.
class Assistant {
public:
    // `provider` may be null, in which case corpus misses degrade.
    Assistant(std::shared_ptr<const qa::QACorpus> corpus, std::shared_ptr<ChatProvider> provider,
              AssistantConfig config = {});

    ChatSession create_session(std::string_view language_code);

    // Throws Error{unknown_session} or Error{empty_message}. Provider failures
    // never escape: they produce a degraded reply.
    AssistantReply handle_message(std::string_view session_id, std::string_view text);

    ChatSession set_profile(std::string_view session_id, std::string_view version);

    ChatSession session(std::string_view session_id) const;
    std::size_t session_count() const;
    bool provider_configured() const noexcept { return provider_ != nullptr; }

    // Appends one JSON line per session.
    void write_snapshot(std::ostream& out) const;

private:
    struct Slot {
        std::mutex mu;
        ChatSession session;
    };

    std::shared_ptr<Slot> slot(std::string_view session_id) const;

    std::shared_ptr<const qa::QACorpus> corpus_;
    std::shared_ptr<ChatProvider> provider_;
    AssistantConfig config_;
    mutable std::shared_mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Slot>, std::less<>> sessions_;
};

}  // namespace neighbor
