// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "casesift/backend.hpp"
#include "casesift/corpus.hpp"

namespace casesift::pipeline {

struct SamplingConfig {
  double confidence = 0.95;
  double margin = 0.05;
  double proportion = 0.5;
};

/// {"kind": "scripted", "script": path} or {"kind": "live", "endpoint", "model",
/// "credentials_env"?, "api_key_header"?, "response_pointer"?, "timeout_s"?},
/// both with optional "max_concurrent_requests" and "retry":
/// {"max_retries", "initial_backoff_ms", "multiplier"}.
llm::BackendConfig backend_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const llm::BackendConfig& config);

/// Everything a run depends on besides the corpus itself. Relative paths in
/// a config file resolve against the file's directory.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::optional<corpus::Date> date_cutoff;
  std::filesystem::path catalog;   ///< empty: shipped keywords.cfg
  std::filesystem::path rules;     ///< empty: shipped search_matrix.cfg
  std::filesystem::path tiers;     ///< empty: shipped court_tiers.cfg
  std::string root_pattern;        ///< empty: default root pattern
  std::optional<llm::BackendConfig> llm;  ///< absent: LLM stage skipped
  std::uint64_t limit_words = 70000;
  SamplingConfig sampling;
  std::filesystem::path gold_labels;  ///< optional label store to evaluate against
  std::vector<std::size_t> kmeans_k{2, 10};
  std::filesystem::path out_dir;
  std::uint64_t seed = 42;

  /// Throws ConfigError on missing or invalid fields.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void validate() const;
};

struct StageRecord {
  std::string name;
  std::string status;  ///< "completed", "reused", "failed", "skipped"
  std::string input_hash;
  nlohmann::json counts;
  std::string error;
};

struct RunManifest {
  std::string started_at;
  std::string finished_at;
  std::string corpus_hash;
  nlohmann::json config;
  std::vector<StageRecord> stages;
  bool completed = false;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  const StageRecord* stage(const std::string& name) const;
};

inline constexpr const char* kStageNames[] = {"ingest", "regex", "keywords", "matrix", "llm",
                                              "sample", "evaluate", "analyze", "charts"};

/// Runs every stage, writing outputs and manifest.json under out_dir. A stage
/// whose inputs hash the same as in an existing manifest (and whose outputs
/// still exist) is reused. On failure the manifest records completed stages
/// and the error is rethrown.
RunManifest run_pipeline(const PipelineConfig& config);

}  // namespace casesift::pipeline
