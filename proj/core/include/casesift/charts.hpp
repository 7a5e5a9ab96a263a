// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "casesift/analytics.hpp"

namespace casesift::charts {

/// Plot area geometry shared by every chart.
struct Frame {
  double width = 640;
  double height = 400;
  double margin_left = 60;
  double margin_right = 20;
  double margin_top = 30;
  double margin_bottom = 50;
};

/// Linear data -> pixel mapping over [x_min, x_max] x [y_min, y_max].
struct Scale {
  Frame frame;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  double x(double v) const;
  double y(double v) const;
};

/// Axis range covering the data (y always includes 0); a degenerate range is
/// widened by one unit on each side.
Scale fit_scale(std::span<const std::pair<double, double>> points, const Frame& frame = {});

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Points are drawn as <circle class="mark"> elements, lines as <polyline>.
std::string line_chart(const std::string& title, std::span<const Series> series, const Frame& frame = {});
std::string bar_chart(const std::string& title, std::span<const std::pair<std::string, double>> bars,
                      const Frame& frame = {});
/// Scatter with the fitted line drawn from x_min to x_max using slope/intercept.
std::string regression_chart(const std::string& title, std::span<const std::pair<double, double>> points,
                             const analytics::RegressionResult& fit, const Frame& frame = {});
/// x = case index, y = word count, colour = cluster.
std::string cluster_chart(const std::string& title, std::span<const double> values,
                          const analytics::ClusteringResult& clustering, const Frame& frame = {});

/// Reads an analysis directory (by_year.csv, by_court.csv, by_tier.csv,
/// regression.json, clusters.csv) and writes one SVG per chart family.
/// Returns the files written.
std::vector<std::filesystem::path> emit_charts(const std::filesystem::path& analysis_dir,
                                               const std::filesystem::path& out_dir);

}  // namespace casesift::charts
