#include "tabsynth/llm.hpp"

#include "tabsynth/interpret.hpp"

#include <thread>

namespace tabsynth {

ExecutionResult DslExecutor::execute(const std::string& candidate_text,
                                     const Table& input) {
  ExecutionResult result;
  Program program;
  try {
    program = parse_program(candidate_text);
  } catch (const DslParseError& e) {
    result.outcome = ExecOutcome::parse_error;
    result.error_text = std::string("program parse error: ") + e.what();
    return result;
  }
  result.program = program;
  try {
    result.output = interpret(program, input);
    result.outcome = ExecOutcome::match;  // caller decides match vs mismatch
  } catch (const InterpError& e) {
    result.outcome = ExecOutcome::runtime_error;
    result.error_text = e.what();
  }
  return result;
}

namespace {

bool retryable(ClientErrorKind kind) {
  return kind == ClientErrorKind::timeout ||
         kind == ClientErrorKind::rate_limited ||
         kind == ClientErrorKind::transport;
}

std::string complete_with_retry(LlmClient& client,
                                const std::vector<ChatMessage>& messages,
                                const LoopConfig& config) {
  std::chrono::milliseconds delay = config.retry_base_delay;
  for (int attempt = 0;; ++attempt) {
    try {
      return client.complete(messages, config.params);
    } catch (const ClientError& e) {
      if (!retryable(e.kind) || attempt >= config.max_retries) throw;
      if (delay.count() > 0) std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }
}

}  // namespace

AttemptTranscript run_loop(const Scenario& s, LlmClient& client,
                           const LoopConfig& config,
                           ProgramExecutor* executor) {
  DslExecutor default_executor;
  if (!executor) executor = &default_executor;

  const int rounds = config.variant == LoopVariant::one_shot
                         ? 1
                         : std::max(1, config.max_rounds);
  AttemptTranscript transcript;

  for (int round = 1; round <= rounds; ++round) {
    RoundRecord rec;
    rec.prompt_messages =
        build_prompt(s, config.knowledge, transcript.rounds, config.variant);

    try {
      rec.raw_response = complete_with_retry(client, rec.prompt_messages,
                                             config);
    } catch (const ClientError& e) {
      rec.exec_outcome = ExecOutcome::client_error;
      rec.error_text = std::string(to_string(e.kind)) + ": " + e.what();
      transcript.client_failure = rec.error_text;
      transcript.rounds.push_back(std::move(rec));
      break;
    }

    auto block = extract_fenced_block(rec.raw_response);
    if (!block) {
      rec.exec_outcome = ExecOutcome::parse_error;
      rec.error_text = "no fenced code block in response";
    } else {
      ExecutionResult exec = executor->execute(*block, s.example_input);
      rec.extracted_program = exec.program;
      if (exec.outcome == ExecOutcome::parse_error ||
          exec.outcome == ExecOutcome::runtime_error) {
        rec.exec_outcome = exec.outcome;
        rec.error_text = exec.error_text;
      } else if (tables_equal(exec.output, s.example_output)) {
        rec.exec_outcome = ExecOutcome::match;
        rec.actual_output = exec.output;
      } else {
        rec.exec_outcome = ExecOutcome::mismatch;
        rec.actual_output = exec.output;
      }
    }

    if (rec.exec_outcome == ExecOutcome::match) {
      transcript.solved = true;
      transcript.program = rec.extracted_program;
      transcript.rounds.push_back(std::move(rec));
      break;
    }

    // Failed round. multi_b asks the verifier for a discrepancy list, which
    // the next prompt carries instead of the raw output diff.
    if (config.variant == LoopVariant::multi_b) {
      TableOrError actual = rec.actual_output
                                ? TableOrError(*rec.actual_output)
                                : TableOrError(rec.error_text);
      try {
        rec.verifier_feedback = verify_structural(actual, s.example_output,
                                                  client, s.name,
                                                  config.params);
      } catch (const ClientError& e) {
        rec.error_text = std::string("verifier ") + to_string(e.kind) + ": " +
                         e.what();
        transcript.client_failure = rec.error_text;
        transcript.rounds.push_back(std::move(rec));
        break;
      }
    }
    transcript.rounds.push_back(std::move(rec));
  }
  return transcript;
}

}  // namespace tabsynth
