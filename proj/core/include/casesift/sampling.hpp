// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "casesift/corpus.hpp"
#include "casesift/labels.hpp"

namespace casesift::sampling {

/// Two-sided standard normal quantile for a supported confidence level
/// (0.90, 0.95, 0.99). Throws ArgumentError listing the supported levels.
double z_value(double confidence);

/// Cochran sample size with finite population correction:
///   n0 = z^2 p (1-p) / e^2,  n = ceil(n0 / (1 + (n0 - 1) / N)),  capped at N.
std::uint64_t required_sample_size(std::uint64_t population, double confidence = 0.95,
                                   double margin = 0.05, double proportion = 0.5);

struct SamplePlan {
  std::string dataset_name;
  std::uint64_t population = 0;
  double confidence = 0.95;
  double margin = 0.05;
  double proportion = 0.5;
  std::uint64_t size = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> ids;  ///< draw order

  nlohmann::json to_json() const;
  static SamplePlan from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static SamplePlan load(const std::filesystem::path& path);
};

/// n distinct ids drawn uniformly without replacement from the id-sorted
/// dataset: a partial Fisher-Yates shuffle driven by casesift::Rng(seed).
/// Throws ArgumentError if n exceeds the dataset size.
SamplePlan draw_sample(const corpus::Dataset& dataset, std::uint64_t n, std::uint64_t seed);

/// required_sample_size followed by draw_sample.
SamplePlan plan_sample(const corpus::Dataset& dataset, double confidence, double margin,
                       double proportion, std::uint64_t seed);

struct LabelRecord {
  std::string case_id;
  Label gold = Label::non_sj;
  std::string reviewer;
  std::string timestamp;  ///< ISO-8601 UTC
};

/// Append-only JSONL label store with last-write-wins materialization.
/// Writes are serialized; reads may run concurrently with them.
class LabelStore {
 public:
  /// Replays an existing file (if any). Only ids in `active` may be labelled.
  LabelStore(std::filesystem::path path, std::set<std::string> active);

  /// Throws NotFoundError for ids outside the active sample.
  LabelRecord record(std::string_view case_id, Label gold, std::string_view reviewer,
                     std::optional<std::string> timestamp = std::nullopt);

  std::optional<LabelRecord> current(std::string_view case_id) const;
  std::vector<LabelRecord> history(std::string_view case_id) const;
  bool is_active(std::string_view case_id) const;
  std::size_t labelled() const;
  std::size_t total() const { return active_.size(); }
  std::map<std::string, Label> gold() const;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::set<std::string, std::less<>> active_;
  mutable std::mutex mu_;
  std::map<std::string, std::vector<LabelRecord>, std::less<>> history_;
};

/// Reads a label store file without sample restrictions; last write wins.
std::map<std::string, Label> read_gold_labels(const std::filesystem::path& path);

/// 2x2 counts with SJ as the positive class.
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fn + fp + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

/// Every gold id needs a prediction; otherwise ArgumentError lists the missing ids.
ConfusionMatrix confusion(const std::map<std::string, Label>& predictions,
                          const std::map<std::string, Label>& gold);

struct ClassMetrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::uint64_t support = 0;
};

struct EvalReport {
  ConfusionMatrix matrix;
  ClassMetrics sj;
  ClassMetrics non_sj;
  double macro_f1 = 0;
  double weighted_f1 = 0;
  double accuracy = 0;
  /// Share of predicted-SJ (resp. predicted-non-SJ) cases the reviewer confirmed.
  double predicted_sj_correct = 0;
  double predicted_non_sj_correct = 0;
  /// Zero denominators met while scoring (the metric is reported as 0).
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  /// Text rendering of the manual-check and confusion-matrix tables.
  std::string to_text(std::string_view title = "") const;
};

EvalReport scores(const ConfusionMatrix& cm);

}  // namespace casesift::sampling
