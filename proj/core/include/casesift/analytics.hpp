// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "casesift/corpus.hpp"

namespace casesift::analytics {

struct YearSeries {
  std::vector<std::pair<int, std::uint64_t>> counts;  ///< contiguous, zero-filled
  std::uint64_t undated = 0;
};

YearSeries counts_by_year(const corpus::Dataset& dataset);

struct CourtCount {
  std::string court;
  std::uint64_t count = 0;
};

/// Descending by count, ties by court name.
std::vector<CourtCount> counts_by_court(const corpus::Dataset& dataset);

inline constexpr std::string_view kUnmappedTier = "unmapped";

/// Verbatim court name -> tier label.
class CourtTierMap {
 public:
  CourtTierMap() = default;
  explicit CourtTierMap(std::vector<std::pair<std::string, std::vector<std::string>>> tiers);

  static CourtTierMap from_config_text(std::string_view text, const std::string& source = "<tiers>");
  static CourtTierMap load(const std::filesystem::path& path);
  /// The shipped court_tiers.cfg.
  static const CourtTierMap& default_map();

  /// Tier labels in config order.
  std::span<const std::string> tiers() const noexcept { return tiers_; }
  std::vector<std::string> courts() const;
  std::size_t court_count() const noexcept { return tier_of_.size(); }
  std::string_view tier_of(std::string_view court) const;

 private:
  std::vector<std::string> tiers_;
  std::map<std::string, std::string, std::less<>> tier_of_;
};

std::string_view tier_of(std::string_view court, const CourtTierMap& map);

struct TierYearCount {
  std::string tier;
  int year = 0;
  std::uint64_t count = 0;
};

/// Per-tier yearly counts over the dataset's year range (zero-filled), tiers in
/// map order followed by "unmapped".
std::vector<TierYearCount> counts_by_tier_year(const corpus::Dataset& dataset, const CourtTierMap& map);

struct RegressionResult {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  /// Two-sided p-value for slope != 0; absent when n < 3.
  std::optional<double> p_value;
  double t_statistic = 0;
  double standard_error = 0;
  std::size_t n = 0;
  /// Set when SS_tot = 0 (r_squared reported as 0).
  bool constant_response = false;

  nlohmann::json to_json() const;
};

/// Ordinary least squares. Throws DegenerateInputError when there are fewer
/// than two points or all x are equal.
RegressionResult linear_regression(std::span<const std::pair<double, double>> points);

/// Regularized incomplete beta I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct DescriptiveStats {
  std::size_t n = 0;
  double mean = 0;
  double stddev = 0;  ///< population
  double min = 0;
  double q25 = 0;
  double median = 0;
  double q75 = 0;
  double max = 0;

  nlohmann::json to_json() const;
};

/// Percentile by linear interpolation between order statistics of sorted
/// values: position q * (n - 1).
double percentile(std::span<const double> sorted, double q);

/// Throws ArgumentError on empty input.
DescriptiveStats describe(std::span<const double> values);
DescriptiveStats word_count_stats(const corpus::Dataset& dataset);

struct Cluster {
  double centroid = 0;
  double min = 0;
  double max = 0;
  std::size_t count = 0;
  double share = 0;
};

struct ClusteringResult {
  std::size_t k = 0;
  std::vector<Cluster> clusters;        ///< ascending centroid
  std::vector<std::size_t> assignment;  ///< per input value
  std::vector<double> objective_history;  ///< within-cluster SS after each assignment step
  std::size_t iterations = 0;

  double objective() const { return objective_history.empty() ? 0.0 : objective_history.back(); }
  std::vector<double> centroids() const;
};

/// Lloyd's algorithm in one dimension. Initial centroids are the sorted
/// distinct values at ranks floor((i + 0.5) * d / k). Ties go to the lower
/// centroid. Throws ArgumentError if k is 0 or exceeds the distinct count.
ClusteringResult kmeans_1d(std::span<const double> values, std::size_t k, std::size_t max_iters = 300,
                           double tol = 1e-9);

/// Within-cluster sum of squares of an assignment with the given centroids.
double within_cluster_ss(std::span<const double> values, std::span<const std::size_t> assignment,
                         std::span<const double> centroids);

struct AnalysisOptions {
  std::vector<std::size_t> kmeans_k{2, 10};
};

struct AnalysisReport {
  YearSeries by_year;
  std::vector<CourtCount> by_court;
  std::vector<TierYearCount> by_tier;
  std::optional<RegressionResult> regression;
  std::optional<DescriptiveStats> word_stats;
  std::vector<ClusteringResult> clusterings;  ///< one per feasible k
  std::vector<std::string> notes;
};

AnalysisReport analyze(const corpus::Dataset& dataset, const CourtTierMap& tiers,
                       const AnalysisOptions& options = {});

/// by_year.csv, by_court.csv, by_tier.csv, regression.json, wordstats.json,
/// clusters.csv (first k), clusters_k<k>.csv, clusters.json and summary.json.
void write_report(const AnalysisReport& report, const corpus::Dataset& dataset,
                  const std::filesystem::path& out_dir);

}  // namespace casesift::analytics
