#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>

#include "kore/errors.hpp"

namespace kore {

struct GenRequest {
  std::string system_prompt;
  std::string user_prompt;
};

/// Key under which a stub response for this request is stored.
std::uint64_t request_key(const GenRequest& req);
std::string request_key_hex(const GenRequest& req);

/// Text-generation backend. Implementations throw ClientError on failure;
/// callers skip the affected sample and continue.
class GenClient {
 public:
  virtual ~GenClient() = default;
  virtual std::string complete(const GenRequest& req) = 0;
};

/// Replays canned responses from <dir>/<request key hex>.txt. A missing
/// file is a ClientError. Pure function of the request bytes.
class StubDirClient : public GenClient {
 public:
  explicit StubDirClient(std::filesystem::path dir);
  std::string complete(const GenRequest& req) override;

 private:
  std::filesystem::path dir_;
};

/// Adapts a callable; handy in tests.
class FunctionClient : public GenClient {
 public:
  explicit FunctionClient(std::function<std::string(const GenRequest&)> fn)
      : fn_(std::move(fn)) {}
  std::string complete(const GenRequest& req) override { return fn_(req); }

 private:
  std::function<std::string(const GenRequest&)> fn_;
};

/// Live chat-completion endpoint (OpenAI-style JSON). The API key is read
/// from the KORE_LLM_API_KEY environment variable. Never used in tests.
class HttpGenClient : public GenClient {
 public:
  explicit HttpGenClient(std::string base_url, std::string model = "gpt-4o");
  std::string complete(const GenRequest& req) override;

 private:
  std::string base_url_;
  std::string model_;
  std::string api_key_;
};

}  // namespace kore
