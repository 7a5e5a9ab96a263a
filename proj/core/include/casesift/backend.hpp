// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace casesift::llm {

struct CompletionRequest {
  std::string case_id;
  std::string prompt;
  std::size_t max_output_tokens = 300;
};

/// A text-completion service. Implementations must be safe to call from
/// several threads at once; failures to obtain a response throw BackendError.
class CompletionBackend {
 public:
  virtual ~CompletionBackend() = default;
  /// Recorded on every decision so runs against different backends can be compared.
  virtual std::string id() const = 0;
  virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Offline backend answering from a fixed case_id -> response table.
/// Every request is recorded.
class ScriptedBackend final : public CompletionBackend {
 public:
  explicit ScriptedBackend(std::map<std::string, std::string> responses, std::string name = "script");

  /// CSV `case_id,response_text`, consumed verbatim.
  static ScriptedBackend from_csv(const std::filesystem::path& path);
  static std::map<std::string, std::string> read_script(const std::filesystem::path& path);

  std::string id() const override { return "script:" + name_; }
  /// Throws BackendError for ids the script does not cover.
  std::string complete(const CompletionRequest& request) override;

  std::vector<CompletionRequest> requests() const;
  std::size_t request_count() const;

 private:
  std::map<std::string, std::string> responses_;
  std::string name_;
  mutable std::mutex mu_;
  std::vector<CompletionRequest> requests_;
};

struct LiveBackendConfig {
  /// e.g. https://api.example.com/v1/complete
  std::string endpoint;
  std::string model;
  /// Name of the environment variable holding the API key.
  std::string credentials_env = "CASESIFT_LLM_KEY";
  std::string api_key_header = "x-api-key";
  /// JSON pointer of the completion text in the response body.
  std::string response_pointer = "/completion";
  std::chrono::seconds timeout{120};
};

/// JSON-over-HTTP(S) completion client. Request body:
/// {"model": ..., "prompt": ..., "max_tokens_to_sample": ...}.
class LiveBackend final : public CompletionBackend {
 public:
  explicit LiveBackend(LiveBackendConfig config);
  ~LiveBackend() override;

  std::string id() const override;
  std::string complete(const CompletionRequest& request) override;

 private:
  LiveBackendConfig config_;
  std::string api_key_;
  std::string scheme_host_port_;
  std::string path_;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

struct BackendConfig {
  enum class Kind { live, scripted };
  Kind kind = Kind::scripted;
  LiveBackendConfig live;
  std::filesystem::path script_path;
  std::size_t max_concurrent_requests = 4;
  RetryPolicy retry;
};

std::unique_ptr<CompletionBackend> make_backend(const BackendConfig& config);

}  // namespace casesift::llm
