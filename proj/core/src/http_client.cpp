#include "tabsynth/llm.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>

namespace tabsynth {

namespace {
using nlohmann::json;
}

HttpLlmClient::HttpLlmClient(HttpClientConfig config)
    : config_(std::move(config)) {}

std::string HttpLlmClient::build_request_body(
    const std::vector<ChatMessage>& messages, const CompletionParams& params,
    const std::string& model) {
  json body;
  body["model"] = model;
  json jmessages = json::array();
  for (const auto& m : messages)
    jmessages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  body["messages"] = std::move(jmessages);
  body["temperature"] = params.temperature;
  body["max_tokens"] = params.max_output;
  if (params.seed) body["seed"] = *params.seed;
  return body.dump();
}

std::string HttpLlmClient::parse_response_body(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw ClientError(ClientErrorKind::malformed_reply,
                      std::string("response is not valid JSON: ") + e.what());
  }
  try {
    return doc.at("choices").at(0).at("message").at("content")
        .get<std::string>();
  } catch (const json::exception&) {
    throw ClientError(ClientErrorKind::malformed_reply,
                      "response lacks choices[0].message.content");
  }
}

std::string HttpLlmClient::complete(const std::vector<ChatMessage>& messages,
                                    const CompletionParams& params) {
  httplib::Client http(config_.endpoint);
  http.set_connection_timeout(config_.timeout.count(), 0);
  http.set_read_timeout(config_.timeout.count(), 0);

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.credential_env.c_str());
      key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);

  const std::string body =
      build_request_body(messages, params, config_.model);
  auto res = http.Post(config_.path, headers, body, "application/json");

  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout ||
        err == httplib::Error::Read || err == httplib::Error::Write)
      throw ClientError(ClientErrorKind::timeout,
                        "request timed out: " + httplib::to_string(err));
    throw ClientError(ClientErrorKind::transport,
                      "transport failure: " + httplib::to_string(err));
  }
  if (res->status == 429)
    throw ClientError(ClientErrorKind::rate_limited,
                      "rate limited (HTTP 429)");
  if (res->status != 200)
    throw ClientError(ClientErrorKind::transport,
                      "HTTP " + std::to_string(res->status) + ": " +
                          res->body.substr(0, 200));
  return parse_response_body(res->body);
}

}  // namespace tabsynth
