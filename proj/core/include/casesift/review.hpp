// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "casesift/corpus.hpp"
#include "casesift/keywords.hpp"
#include "casesift/llm.hpp"
#include "casesift/matrix.hpp"
#include "casesift/sampling.hpp"

namespace casesift::review {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

struct ReviewConfig {
  std::vector<corpus::Dataset> datasets;       ///< case text sources
  std::vector<sampling::SamplePlan> samples;   ///< queue = concatenated draw order
  std::filesystem::path label_store;
  std::map<std::string, Label> matrix_predictions;
  std::map<std::string, llm::LlmDecision> llm_decisions;
  std::string reviewer = "reviewer";
  /// Predictions are revealed only after a case is labelled unless false.
  bool blind = true;
  const keywords::KeywordCatalog* catalog = nullptr;  ///< defaults to the shipped catalog
};

/// Transport-independent review API. All JSON payloads are produced here;
/// the HTTP server only routes.
class ReviewService {
 public:
  /// Throws NotFoundError if a sampled id has no case text.
  explicit ReviewService(ReviewConfig config);

  ApiResponse session() const;
  ApiResponse next_case() const;
  ApiResponse case_by_id(std::string_view id) const;
  /// Body: {"case_id", "label", "reviewer"?}; the header reviewer is used
  /// when the body has none.
  ApiResponse post_label(const nlohmann::json& body, std::string_view reviewer_header = "");
  /// method: "matrix" or "llm"; empty picks the first available.
  ApiResponse metrics(std::string_view method = "") const;
  ApiResponse predictions(std::string_view id) const;

  const sampling::LabelStore& store() const { return *store_; }

 private:
  nlohmann::json case_payload(const corpus::Case& c) const;
  std::map<std::string, Label> predictions_for(std::string_view method) const;

  ReviewConfig config_;
  std::vector<std::string> queue_;
  std::map<std::string, const corpus::Case*, std::less<>> cases_;
  std::unique_ptr<sampling::LabelStore> store_;
};

/// Report for the given predictions over every label in the store: the same
/// computation behind `casesift evaluate` and GET /api/metrics.
sampling::EvalReport evaluate_labels(const std::map<std::string, Label>& predictions,
                                     const std::map<std::string, Label>& gold);

/// Loads predictions from matrix_decisions.csv or an LLM decision log (.jsonl);
/// LLM cases that were skipped or unparseable have no prediction.
std::map<std::string, Label> load_predictions(const std::filesystem::path& path);

/// HTTP front end:
///   GET  /api/session, /api/cases/next, /api/cases/{id}, /api/metrics,
///        /api/predictions/{id}
///   POST /api/labels
/// Static files (the review UI) are served from static_dir when set.
class ReviewServer {
 public:
  explicit ReviewServer(ReviewService& service, std::filesystem::path static_dir = {});
  ~ReviewServer();

  /// Binds and starts serving on a background thread. port 0 picks a free
  /// port. Throws Error if the address cannot be bound.
  int start(const std::string& host, int port);
  /// Blocks serving on the calling thread.
  void serve_forever(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace casesift::review
