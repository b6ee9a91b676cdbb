#include "kore/augment/gen_client.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#define CPPHTTPLIB_NO_EXCEPTIONS
#include "httplib.h"
#include "json.hpp"

#include "kore/rng.hpp"

namespace kore {

std::uint64_t request_key(const GenRequest& req) {
  std::string bytes = req.system_prompt;
  bytes.push_back('\x1f');
  bytes += req.user_prompt;
  return fnv1a64(bytes);
}

std::string request_key_hex(const GenRequest& req) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(request_key(req)));
  return std::string(buf);
}

StubDirClient::StubDirClient(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string StubDirClient::complete(const GenRequest& req) {
  const std::filesystem::path path = dir_ / (request_key_hex(req) + ".txt");
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ClientError("stub client: no canned response " + path.filename().string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

HttpGenClient::HttpGenClient(std::string base_url, std::string model)
    : base_url_(std::move(base_url)), model_(std::move(model)) {
  if (const char* key = std::getenv("KORE_LLM_API_KEY")) api_key_ = key;
}

std::string HttpGenClient::complete(const GenRequest& req) {
  httplib::Client client(base_url_);
  client.set_read_timeout(120, 0);

  nlohmann::json body;
  body["model"] = model_;
  body["messages"] = {{{"role", "system"}, {"content", req.system_prompt}},
                      {{"role", "user"}, {"content", req.user_prompt}}};

  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
  if (!res) throw ClientError("http client: request failed");
  if (res->status != 200) {
    throw ClientError("http client: status " + std::to_string(res->status));
  }
  try {
    const nlohmann::json reply = nlohmann::json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ClientError("http client: malformed reply: " + std::string(e.what()));
  }
}

}  // namespace kore
