#pragma once

// OpenAI-compatible chat client with offline replay, plus MR generation and
// LLM evaluation on top of it.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrbench/catalog.hpp"
#include "mrbench/score_sheet.hpp"

namespace mrbench::llm {

struct ChatMessage {
    std::string role;
    std::string content;
    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    std::string model;
    std::vector<ChatMessage> messages;
    std::optional<double> temperature;

    /// Wire body; keys are sorted, so dump() doubles as the replay key.
    nlohmann::json to_json() const;
    static ChatRequest from_json(const nlohmann::json& j);
};

struct Usage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

struct ChatResponse {
    std::string text;
    std::string model;
    Usage usage;
};

/// Reads the first choice of a chat-completions response body.
ChatResponse parse_chat_completion(const nlohmann::json& body);

struct Transcript {
    ChatRequest request;
    std::string response_text;
    std::string model;
    std::string timestamp;
    Usage usage;
    std::string mode;  // "live" or "replay"

    nlohmann::json to_json() const;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual ChatResponse send(const ChatRequest& request) = 0;
    virtual std::string mode() const = 0;
};

/// POSTs to <base_url>/chat/completions. Failures without an HTTP response and
/// 429/5xx statuses raise retriable TransportErrors.
class HttpTransport : public Transport {
public:
    HttpTransport(std::string base_url, std::string api_key, std::chrono::seconds timeout = std::chrono::seconds(60));
    ChatResponse send(const ChatRequest& request) override;
    std::string mode() const override { return "live"; }

private:
    std::string base_url_;
    std::string api_key_;
    std::chrono::seconds timeout_;
};

/// Serves recorded exchanges. Each fixture file is {"request": ..., "response": ...}
/// with the response in chat-completions form; lookup is by exact request.
class ReplayTransport : public Transport {
public:
    explicit ReplayTransport(const std::filesystem::path& dir);
    ChatResponse send(const ChatRequest& request) override;
    std::string mode() const override { return "replay"; }
    std::size_t size() const { return fixtures_.size(); }

private:
    std::map<std::string, nlohmann::json> fixtures_;
};

/// Writes a replay fixture for `request`; the file name is derived from the request.
std::filesystem::path write_replay_fixture(const std::filesystem::path& dir, const ChatRequest& request,
                                           const ChatResponse& response, const std::string& label);

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    double multiplier = 2.0;
    std::function<void(std::chrono::milliseconds)> sleep;  // defaults to a real sleep
};

struct GatewayConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "gpt-4";
    std::string api_key;
    std::filesystem::path replay_dir;
    std::filesystem::path transcript_dir;

    bool live() const { return !api_key.empty(); }
    /// MRBENCH_LLM_URL, MRBENCH_LLM_MODEL, MRBENCH_LLM_API_KEY (or OPENAI_API_KEY),
    /// MRBENCH_REPLAY_DIR, MRBENCH_TRANSCRIPT_DIR. Without a key the session replays.
    static GatewayConfig from_env();
};

class Session {
public:
    explicit Session(const GatewayConfig& config, RetryPolicy retry = {});
    Session(std::unique_ptr<Transport> transport, std::string model, std::filesystem::path transcript_dir = {},
            RetryPolicy retry = {});

    /// Sends with retries and records the transcript before returning.
    ChatResponse complete(const ChatRequest& request);

    const std::string& model() const { return model_; }
    std::string mode() const { return transport_->mode(); }
    const std::vector<Transcript>& transcripts() const { return transcripts_; }

private:
    std::unique_ptr<Transport> transport_;
    std::string model_;
    std::filesystem::path transcript_dir_;
    RetryPolicy retry_;
    std::string session_id_;
    std::vector<Transcript> transcripts_;
};

// ---- MR generation ----

struct MrDraft {
    int index = 0;
    std::string title;
    std::string narrative;
};

struct GenerationResult {
    std::string sut_id;
    int requested = 0;
    std::vector<MrDraft> drafts;
    std::string raw_text;

    bool shortfall() const { return static_cast<int>(drafts.size()) < requested; }
};

std::string render_generation_prompt(const SutDescriptor& sut, int count);
ChatRequest generation_request(const SutDescriptor& sut, int count, const std::string& model);
/// Numbered "n. Title: description" items; continuation lines join the description.
std::vector<MrDraft> parse_mr_drafts(const std::string& text);
/// Throws PreconditionError for count < 1; a short reply yields shortfall().
GenerationResult generate_mrs(const SutDescriptor& sut, int count, Session& session);

// ---- LLM evaluation ----

struct EvaluatorPersona {
    Scheme scheme = Scheme::Updated;
    std::string role_preamble;
    std::string criteria_block;
    std::string answer_format;

    static EvaluatorPersona standard();
    std::string render() const;
};

std::string render_evaluation_prompt(const MetamorphicRelation& mr, const SutDescriptor* sut);
ChatRequest evaluation_request(const MetamorphicRelation& mr, const SutDescriptor* sut,
                               const EvaluatorPersona& persona, const std::string& model);

struct ScoreTable {
    std::map<std::string, int> scores;
    std::vector<std::string> unmatched_rows;
    std::string justification;  // text after the table
};

/// Finds the seven Updated criteria in a markdown or fenced table. Throws
/// ParseError on duplicates or when fewer than seven criteria are present.
ScoreTable parse_score_table(const std::string& text);

struct EvaluationOptions {
    std::string evaluator_id;  // defaults to "llm:<model>"
    std::string created_at;
    std::string generator_model = "GPT-4";
};

/// Scores one MR. Out-of-range levels raise ParseError; gate violations are
/// corrected and flagged "gate-corrected".
RubricScoreSheet evaluate_mr(const MetamorphicRelation& mr, const SutDescriptor* sut, const EvaluatorPersona& persona,
                             Session& session, const EvaluationOptions& options = {});

}  // namespace mrbench::llm
