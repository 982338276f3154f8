#include "tabsynth/llm.hpp"

#include <sstream>

namespace tabsynth {

const char* to_string(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "unknown";
}

const char* to_string(ClientErrorKind kind) {
  switch (kind) {
    case ClientErrorKind::timeout: return "timeout";
    case ClientErrorKind::rate_limited: return "rate_limited";
    case ClientErrorKind::transport: return "transport";
    case ClientErrorKind::malformed_reply: return "malformed_reply";
  }
  return "unknown";
}

const char* to_string(LoopVariant v) {
  switch (v) {
    case LoopVariant::one_shot: return "one_shot";
    case LoopVariant::multi_a: return "multi_a";
    case LoopVariant::multi_b: return "multi_b";
  }
  return "unknown";
}

const char* to_string(ExecOutcome outcome) {
  switch (outcome) {
    case ExecOutcome::parse_error: return "parse_error";
    case ExecOutcome::runtime_error: return "runtime_error";
    case ExecOutcome::mismatch: return "mismatch";
    case ExecOutcome::match: return "match";
    case ExecOutcome::client_error: return "client_error";
  }
  return "unknown";
}

namespace {

constexpr std::string_view kGeneratorSystemPrompt =
    "You write programs in a small table-edit language. Given an example "
    "input table and the desired output table, produce a program that "
    "performs the transformation. Always answer with exactly one fenced "
    "code block containing only the program.";

std::string previous_program_text(const RoundRecord& prior) {
  if (prior.extracted_program)
    return print_program(*prior.extracted_program);
  return "(the response contained no parseable program)";
}

std::string actual_result_text(const RoundRecord& prior) {
  if (prior.actual_output) return table_to_json(*prior.actual_output);
  return prior.error_text;
}

std::string first_round_user_message(const Scenario& s, bool knowledge) {
  std::ostringstream os;
  os << "Task: " << s.name << "\nRound: 1\n\n";
  os << "Write a program that transforms the example input table into the "
        "example output table.\n";
  os << "Tables are JSON arrays of rows; each row is an array of string "
        "cells.\n\n";
  os << "Example input:\n" << table_to_json(s.example_input) << "\n\n";
  os << "Example output:\n" << table_to_json(s.example_output) << "\n\n";
  os << "The same program will be applied to these test inputs:\n";
  os << "[";
  for (std::size_t i = 0; i < s.tests.size(); ++i) {
    if (i) os << ",";
    os << table_to_json(s.tests[i].input);
  }
  os << "]\n\n";
  os << "Respond with exactly one fenced code block containing only the "
        "program. The program grammar is:\n\n"
     << dsl_grammar_text();
  if (knowledge)
    os << "\nAvailable operations:\n" << operator_catalog_text();
  return os.str();
}

std::string follow_up_user_message(const Scenario& s, const RoundRecord& prior,
                                   int round, LoopVariant variant) {
  std::ostringstream os;
  os << "Task: " << s.name << "\nRound: " << round << "\n\n";
  os << "Your previous program:\n" << previous_program_text(prior) << "\n\n";
  if (variant == LoopVariant::multi_b && prior.verifier_feedback) {
    os << "A verifier reviewed the result and reported these structural "
          "discrepancies:\n"
       << *prior.verifier_feedback << "\n\n";
  } else {
    os << "Result of running it on the example input:\n"
       << actual_result_text(prior) << "\n\n";
    os << "Expected example output:\n" << table_to_json(s.example_output)
       << "\n\n";
  }
  os << "Produce a corrected program. Respond with exactly one fenced code "
        "block containing only the program.";
  return os.str();
}

}  // namespace

std::vector<ChatMessage> build_prompt(const Scenario& s, bool knowledge,
                                      const std::vector<RoundRecord>& history,
                                      LoopVariant variant) {
  std::vector<ChatMessage> messages;
  messages.push_back({Role::system, std::string(kGeneratorSystemPrompt)});
  messages.push_back({Role::user, first_round_user_message(s, knowledge)});
  for (std::size_t i = 0; i < history.size(); ++i) {
    messages.push_back({Role::assistant, history[i].raw_response});
    messages.push_back(
        {Role::user, follow_up_user_message(s, history[i],
                                            static_cast<int>(i) + 2, variant)});
  }
  return messages;
}

std::optional<std::string> extract_fenced_block(const std::string& response) {
  // The last ``` ... ``` block wins. The opening fence may carry a language
  // tag; the fence line runs to the next newline.
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = response.find("```", pos);
    if (open == std::string::npos) break;
    std::size_t content_start = response.find('\n', open + 3);
    if (content_start == std::string::npos) break;
    ++content_start;
    std::size_t close = response.find("```", content_start);
    if (close == std::string::npos) break;
    blocks.emplace_back(content_start, close);
    pos = close + 3;
  }
  if (blocks.empty()) return std::nullopt;
  auto [start, end] = blocks.back();
  return response.substr(start, end - start);
}

Program extract_program(const std::string& response) {
  auto block = extract_fenced_block(response);
  if (!block) throw ExtractError("no fenced code block in response");
  return parse_program(*block);
}

std::string verify_structural(const TableOrError& actual,
                              const Table& expected, LlmClient& client,
                              std::string_view task_label,
                              const CompletionParams& params) {
  std::ostringstream os;
  os << "Verification request\n";
  if (!task_label.empty()) os << "Task: " << task_label << "\n";
  os << "\nProduced output:\n";
  if (std::holds_alternative<Table>(actual))
    os << table_to_json(std::get<Table>(actual));
  else
    os << std::get<std::string>(actual);
  os << "\n\nExpected output:\n" << table_to_json(expected) << "\n\n";
  os << "List the high-level structural discrepancies between the produced "
        "and expected outputs (row and column counts, misplaced or "
        "mistransformed values). Be brief and concrete.";

  std::vector<ChatMessage> messages;
  messages.push_back(
      {Role::system,
       "You compare a produced table against an expected table and report "
       "high-level structural errors."});
  messages.push_back({Role::user, os.str()});
  return client.complete(messages, params);
}

}  // namespace tabsynth
