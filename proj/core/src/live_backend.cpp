// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "casesift/backend.hpp"
#include "casesift/errors.hpp"

namespace casesift::llm {

LiveBackend::LiveBackend(LiveBackendConfig config) : config_(std::move(config)) {
  const auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("live backend endpoint must be an http(s) URL");
  const auto path_start = config_.endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = config_.endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
  if (config_.model.empty()) throw ConfigError("live backend needs a model name");
  const char* key = std::getenv(config_.credentials_env.c_str());
  if (!key || !*key) throw ConfigError("environment variable " + config_.credentials_env + " is not set");
  api_key_ = key;
}

LiveBackend::~LiveBackend() = default;

std::string LiveBackend::id() const { return "live:" + config_.model + "@" + scheme_host_port_; }

std::string LiveBackend::complete(const CompletionRequest& request) {
  httplib::Client client(scheme_host_port_);
  const auto timeout = static_cast<time_t>(config_.timeout.count());
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  const nlohmann::json body{{"model", config_.model},
                            {"prompt", request.prompt},
                            {"max_tokens_to_sample", request.max_output_tokens}};
  httplib::Headers headers{{config_.api_key_header, api_key_}};
  auto res = client.Post(path_, headers, body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace),
                         "application/json");
  if (!res) throw BackendError("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw BackendError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  try {
    const auto reply = nlohmann::json::parse(res->body);
    return reply.at(nlohmann::json::json_pointer(config_.response_pointer)).get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("unexpected response body: ") + e.what());
  }
}

std::unique_ptr<CompletionBackend> make_backend(const BackendConfig& config) {
  if (config.kind == BackendConfig::Kind::live) return std::make_unique<LiveBackend>(config.live);
  if (config.script_path.empty()) throw ConfigError("scripted backend needs a script path");
  return std::make_unique<ScriptedBackend>(ScriptedBackend::read_script(config.script_path),
                                           config.script_path.filename().string());
}

}  // namespace casesift::llm
