#pragma once

#include "tabsynth/dsl.hpp"
#include "tabsynth/scenario.hpp"
#include "tabsynth/table.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tabsynth {

enum class Role { system, user, assistant };

const char* to_string(Role role);

struct ChatMessage {
  Role role;
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

struct CompletionParams {
  double temperature = 0.0;
  int max_output = 2048;
  std::optional<std::uint64_t> seed;
};

enum class ClientErrorKind { timeout, rate_limited, transport, malformed_reply };

const char* to_string(ClientErrorKind kind);

struct ClientError : std::runtime_error {
  ClientErrorKind kind;
  ClientError(ClientErrorKind kind_, const std::string& msg)
      : std::runtime_error(msg), kind(kind_) {}
};

// Chat-completion client contract. complete() never mutates its inputs and
// must be safe to call from several threads at once; failures surface as
// ClientError.
class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string complete(const std::vector<ChatMessage>& messages,
                               const CompletionParams& params) = 0;
};

enum class LoopVariant { one_shot, multi_a, multi_b };

const char* to_string(LoopVariant v);

struct LoopConfig {
  LoopVariant variant = LoopVariant::multi_a;
  bool knowledge = false;
  int max_rounds = 10;  // one_shot always runs exactly one round
  CompletionParams params;
  int max_retries = 3;  // transient client errors, exponential backoff
  std::chrono::milliseconds retry_base_delay{500};
};

enum class ExecOutcome { parse_error, runtime_error, mismatch, match, client_error };

const char* to_string(ExecOutcome outcome);

// Runs one candidate program text against a table. The default backend
// parses the text as a DSL program and interprets it in-process; a backend
// executing generated general-purpose code in an isolated child process
// (with time and memory limits) can be slotted in through this interface
// without touching the repair loop.
struct ExecutionResult {
  ExecOutcome outcome = ExecOutcome::parse_error;  // parse_error, runtime_error or match*
  Table output;                                    // valid when outcome is not an error
  std::string error_text;
  std::optional<Program> program;  // present when the backend yields a replayable program
};

class ProgramExecutor {
 public:
  virtual ~ProgramExecutor() = default;
  virtual ExecutionResult execute(const std::string& candidate_text,
                                  const Table& input) = 0;
};

class DslExecutor : public ProgramExecutor {
 public:
  ExecutionResult execute(const std::string& candidate_text,
                          const Table& input) override;
};

struct RoundRecord {
  std::vector<ChatMessage> prompt_messages;
  std::string raw_response;
  std::optional<Program> extracted_program;
  ExecOutcome exec_outcome = ExecOutcome::parse_error;
  std::optional<Table> actual_output;  // present when execution produced a table
  std::string error_text;              // parse/runtime/client error text
  std::optional<std::string> verifier_feedback;  // multi_b failed rounds
};

struct AttemptTranscript {
  std::vector<RoundRecord> rounds;
  bool solved = false;
  std::optional<Program> program;  // present when solved via a replayable backend
  std::optional<std::string> client_failure;  // transport failure that ended the loop
};

// Builds the message list for the next generator round. The first round
// carries the task header, both example tables and the test inputs in JSON,
// the program grammar, and the fenced-block instruction; with
// knowledge=true it also carries the operator catalog. Later rounds append
// the full prior conversation plus a feedback message: the previous program
// with its actual output (or error text) and the expected output for
// multi_a, or the verifier's discrepancy list for multi_b.
std::vector<ChatMessage> build_prompt(const Scenario& s, bool knowledge,
                                      const std::vector<RoundRecord>& history,
                                      LoopVariant variant);

// The last ``` fenced block in a response, without the fence lines.
std::optional<std::string> extract_fenced_block(const std::string& response);

struct ExtractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses the last fenced block as a DSL program. Throws ExtractError when
// no fenced block exists; DslParseError propagates.
Program extract_program(const std::string& response);

// Either an executed output table or the executor's error text.
using TableOrError = std::variant<Table, std::string>;

// One verifier call: sends the produced output (or error text) and the
// expected output, returns the reply verbatim as the discrepancy list.
// task_label, when present, is echoed in the prompt so scripted clients can
// key their replies by scenario.
std::string verify_structural(const TableOrError& actual,
                              const Table& expected, LlmClient& client,
                              std::string_view task_label = {},
                              const CompletionParams& params = {});

// The generate/execute/compare loop. Each round prompts the client,
// extracts a program, runs it on the example input and compares against the
// example output; a match stops the loop as solved. multi_b runs one
// verifier call after every failed round and feeds the discrepancy list
// into the next prompt. Transient client errors are retried with
// exponential backoff; a persistent failure ends the loop with the reason
// preserved.
AttemptTranscript run_loop(const Scenario& s, LlmClient& client,
                           const LoopConfig& config,
                           ProgramExecutor* executor = nullptr);

// ---------------------------------------------------------------------------
// Scripted client for offline runs. The script keys generator responses by
// (scenario name, round index) and verifier responses by scenario name, so
// transcripts do not depend on global call order:
//
//   {
//     "default_response": "...",            // optional fallback
//     "verifier_default": "...",            // optional fallback
//     "scenarios": {
//       "<name>": {
//         "rounds": {"1": "...", "2": "..."},
//         "verifier": "..."                 // optional
//       }
//     }
//   }
class MockLlmClient : public LlmClient {
 public:
  MockLlmClient() = default;
  MockLlmClient(MockLlmClient&& other) noexcept
      : scenarios_(std::move(other.scenarios_)),
        default_response_(std::move(other.default_response_)),
        verifier_default_(std::move(other.verifier_default_)),
        total_calls_(other.total_calls_.load()),
        generator_calls_(other.generator_calls_.load()),
        verifier_calls_(other.verifier_calls_.load()) {}

  static MockLlmClient from_json_text(const std::string& text);
  static MockLlmClient from_file(const std::string& path);

  std::string complete(const std::vector<ChatMessage>& messages,
                       const CompletionParams& params) override;

  int total_calls() const { return total_calls_.load(); }
  int generator_calls() const { return generator_calls_.load(); }
  int verifier_calls() const { return verifier_calls_.load(); }

 private:
  struct ScenarioScript {
    std::map<int, std::string> rounds;
    std::optional<std::string> verifier;
  };
  std::map<std::string, ScenarioScript> scenarios_;
  std::optional<std::string> default_response_;
  std::optional<std::string> verifier_default_;
  std::atomic<int> total_calls_{0};
  std::atomic<int> generator_calls_{0};
  std::atomic<int> verifier_calls_{0};
};

// ---------------------------------------------------------------------------
// HTTP adapter for chat-completion-style endpoints. Request body:
//   {"model": ..., "messages": [{"role": ..., "content": ...}...],
//    "temperature": ..., "max_tokens": ..., "seed": ...}
// Reply text is read from choices[0].message.content. HTTP 429 maps to
// rate_limited, timeouts to timeout, other non-200 statuses to transport,
// and unparseable bodies to malformed_reply. The API credential is read
// from the environment variable named in the config, never from flags.
struct HttpClientConfig {
  std::string endpoint;  // scheme://host[:port]
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string credential_env = "TABSYNTH_API_KEY";
  std::chrono::seconds timeout{120};
};

class HttpLlmClient : public LlmClient {
 public:
  explicit HttpLlmClient(HttpClientConfig config);

  std::string complete(const std::vector<ChatMessage>& messages,
                       const CompletionParams& params) override;

  static std::string build_request_body(
      const std::vector<ChatMessage>& messages, const CompletionParams& params,
      const std::string& model);
  static std::string parse_response_body(const std::string& body);

 private:
  HttpClientConfig config_;
};

}  // namespace tabsynth
