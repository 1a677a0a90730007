// Copyright 2026 The pedforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "pedforge/error.hpp"
#include "pedforge/gateway.hpp"

namespace pedforge::llm {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::Validation, "LLM endpoint must be an http(s) URL: " + url);
  }
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttpProvider final : public Provider {
 public:
  explicit HttpProvider(HttpProviderConfig cfg) : cfg_(std::move(cfg)), ep_(split_endpoint(cfg_.endpoint)) {}

  std::string name() const override { return "http:" + cfg_.model; }

  std::string complete(const std::string& prompt) override {
    httplib::Client cli(ep_.origin);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout).count();
    cli.set_connection_timeout(secs ? secs : 1, 0);
    cli.set_read_timeout(secs ? secs : 1, 0);
    cli.set_write_timeout(secs ? secs : 1, 0);
    if (!cfg_.api_key.empty()) cli.set_bearer_token_auth(cfg_.api_key);

    nlohmann::json body = {
        {"model", cfg_.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
    auto res = cli.Post(ep_.path, body.dump(), "application/json");
    if (!res) {
      throw std::runtime_error("request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw std::runtime_error("endpoint answered HTTP " + std::to_string(res->status));
    }
    auto reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) throw std::runtime_error("endpoint returned invalid JSON");
    const auto& choices = reply.value("choices", nlohmann::json::array());
    if (!choices.is_array() || choices.empty()) throw std::runtime_error("reply has no choices");
    const auto& msg = choices[0].value("message", nlohmann::json::object());
    if (!msg.contains("content") || !msg["content"].is_string()) {
      throw std::runtime_error("reply has no message content");
    }
    return msg["content"].get<std::string>();
  }

 private:
  HttpProviderConfig cfg_;
  Endpoint ep_;
};

std::string env_or(const char* name, std::string fallback = {}) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : fallback;
}

}  // namespace

std::shared_ptr<Provider> http_provider(HttpProviderConfig config) {
  return std::make_shared<HttpProvider>(std::move(config));
}

HttpProviderConfig http_provider_config_from_env() {
  HttpProviderConfig cfg;
  cfg.endpoint = env_or("PEDFORGE_LLM_ENDPOINT");
  cfg.model = env_or("PEDFORGE_LLM_MODEL", "default");
  cfg.api_key = env_or("PEDFORGE_LLM_API_KEY");
  if (cfg.endpoint.empty()) {
    throw Error(ErrorCode::Validation,
                "no LLM endpoint configured: set PEDFORGE_LLM_ENDPOINT or pass --mock-llm <seed>");
  }
  return cfg;
}

}  // namespace pedforge::llm
