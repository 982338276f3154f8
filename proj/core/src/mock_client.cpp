#include "tabsynth/llm.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace tabsynth {

namespace {

using nlohmann::json;

// Generator prompts carry "Task: <name>" in the first user message and
// their round equals one plus the number of assistant messages (the prior
// history travels with the prompt). Verifier prompts start their user
// message with "Verification request".
std::optional<std::string> find_task_label(const std::string& content) {
  constexpr std::string_view kPrefix = "Task: ";
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(kPrefix, 0) == 0)
      return line.substr(kPrefix.size());
  }
  return std::nullopt;
}

}  // namespace

MockLlmClient MockLlmClient::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ClientError(ClientErrorKind::malformed_reply,
                      std::string("mock script is not valid JSON: ") +
                          e.what());
  }
  MockLlmClient client;
  if (doc.contains("default_response"))
    client.default_response_ = doc["default_response"].get<std::string>();
  if (doc.contains("verifier_default"))
    client.verifier_default_ = doc["verifier_default"].get<std::string>();
  if (doc.contains("scenarios")) {
    for (const auto& [name, body] : doc["scenarios"].items()) {
      ScenarioScript script;
      if (body.contains("rounds"))
        for (const auto& [round, reply] : body["rounds"].items())
          script.rounds[std::stoi(round)] = reply.get<std::string>();
      if (body.contains("verifier"))
        script.verifier = body["verifier"].get<std::string>();
      client.scenarios_.emplace(name, std::move(script));
    }
  }
  return client;
}

MockLlmClient MockLlmClient::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ClientError(ClientErrorKind::transport,
                      "cannot read mock script: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string MockLlmClient::complete(const std::vector<ChatMessage>& messages,
                                    const CompletionParams& params) {
  (void)params;
  total_calls_.fetch_add(1);

  const ChatMessage* first_user = nullptr;
  const ChatMessage* last_user = nullptr;
  int assistant_count = 0;
  for (const auto& m : messages) {
    if (m.role == Role::user) {
      if (!first_user) first_user = &m;
      last_user = &m;
    } else if (m.role == Role::assistant) {
      ++assistant_count;
    }
  }
  if (!last_user)
    throw ClientError(ClientErrorKind::malformed_reply,
                      "mock: prompt has no user message");

  const bool verifier_call =
      last_user->content.rfind("Verification request", 0) == 0;

  if (verifier_call) {
    verifier_calls_.fetch_add(1);
    if (auto label = find_task_label(last_user->content)) {
      auto it = scenarios_.find(*label);
      if (it != scenarios_.end() && it->second.verifier)
        return *it->second.verifier;
    }
    if (verifier_default_) return *verifier_default_;
    if (default_response_) return *default_response_;
    throw ClientError(ClientErrorKind::malformed_reply,
                      "mock: no scripted verifier response");
  }

  generator_calls_.fetch_add(1);
  auto label = find_task_label(first_user->content);
  const int round = assistant_count + 1;
  if (label) {
    auto it = scenarios_.find(*label);
    if (it != scenarios_.end()) {
      auto r = it->second.rounds.find(round);
      if (r != it->second.rounds.end()) return r->second;
    }
  }
  if (default_response_) return *default_response_;
  throw ClientError(
      ClientErrorKind::malformed_reply,
      "mock: no scripted response for task '" + label.value_or("?") +
          "' round " + std::to_string(round));
}

}  // namespace tabsynth
