// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

// Numeric routines behind the analytics module: OLS with a t-test on the slope,
// descriptive statistics and one-dimensional k-means.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "casesift/analytics.hpp"
#include "casesift/errors.hpp"

namespace casesift::analytics {

namespace {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxTerms = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1;
  const double qam = a - 1;
  double c = 1;
  double d = 1 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw ArgumentError("incomplete beta needs positive shape parameters");
  if (!(x >= 0 && x <= 1)) throw ArgumentError("incomplete beta needs x in [0, 1]");
  if (x == 0) return 0;
  if (x == 1) return 1;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
  return 1 - front * beta_continued_fraction(b, a, 1 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw ArgumentError("degrees of freedom must be positive");
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0;
  return regularized_incomplete_beta(df / 2, 0.5, df / (df + t * t));
}

RegressionResult linear_regression(std::span<const std::pair<double, double>> points) {
  const std::size_t n = points.size();
  if (n < 2) throw DegenerateInputError("regression needs at least two points");
  double mx = 0;
  double my = 0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0;
  double sxy = 0;
  double syy = 0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw DegenerateInputError("regression needs at least two distinct x values");

  RegressionResult r;
  r.n = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss_res = 0;
  for (const auto& [x, y] : points) {
    const double e = y - (r.intercept + r.slope * x);
    ss_res += e * e;
  }
  if (syy == 0) {
    r.constant_response = true;
    r.r_squared = 0;
  } else {
    r.r_squared = std::clamp(1 - ss_res / syy, 0.0, 1.0);
  }
  if (n >= 3) {
    const double df = static_cast<double>(n - 2);
    r.standard_error = std::sqrt(ss_res / df / sxx);
    if (r.standard_error > 0) {
      r.t_statistic = r.slope / r.standard_error;
      r.p_value = student_t_two_sided_p(r.t_statistic, df);
    } else if (r.slope != 0) {
      r.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), r.slope);
      r.p_value = 0.0;
    } else {
      r.t_statistic = 0;
      r.p_value = 1.0;
    }
  }
  return r;
}

nlohmann::json RegressionResult::to_json() const {
  nlohmann::json j{{"slope", slope},
                   {"intercept", intercept},
                   {"r_squared", r_squared},
                   {"standard_error", standard_error},
                   {"n", n},
                   {"constant_response", constant_response}};
  j["t_statistic"] = std::isfinite(t_statistic) ? nlohmann::json(t_statistic) : nlohmann::json(nullptr);
  j["p_value"] = p_value ? nlohmann::json(*p_value) : nlohmann::json(nullptr);
  return j;
}

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw ArgumentError("percentile of an empty sample");
  if (!(q >= 0 && q <= 1)) throw ArgumentError("percentile rank must be in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

DescriptiveStats describe(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("cannot describe an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  DescriptiveStats s;
  s.n = v.size();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(s.n);
  double ss = 0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(s.n));
  s.min = v.front();
  s.max = v.back();
  s.q25 = percentile(v, 0.25);
  s.median = percentile(v, 0.5);
  s.q75 = percentile(v, 0.75);
  return s;
}

nlohmann::json DescriptiveStats::to_json() const {
  return {{"n", n},     {"mean", mean},     {"stddev", stddev}, {"min", min},
          {"q25", q25}, {"median", median}, {"q75", q75},       {"max", max}};
}

std::vector<double> ClusteringResult::centroids() const {
  std::vector<double> out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(c.centroid);
  return out;
}

double within_cluster_ss(std::span<const double> values, std::span<const std::size_t> assignment,
                         std::span<const double> centroids) {
  if (values.size() != assignment.size()) throw ArgumentError("assignment length does not match values");
  double ss = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (assignment[i] >= centroids.size()) throw ArgumentError("assignment out of range");
    const double d = values[i] - centroids[assignment[i]];
    ss += d * d;
  }
  return ss;
}

namespace {

// Nearest centroid; centroids ascending, ties to the lower index.
std::size_t nearest(double x, const std::vector<double>& centroids) {
  std::size_t best = 0;
  double best_d = std::abs(x - centroids[0]);
  for (std::size_t j = 1; j < centroids.size(); ++j) {
    const double d = std::abs(x - centroids[j]);
    if (d < best_d) {
      best = j;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

ClusteringResult kmeans_1d(std::span<const double> values, std::size_t k, std::size_t max_iters, double tol) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  for (double v : values) {
    if (!std::isfinite(v)) throw ArgumentError("k-means input must be finite");
  }
  std::vector<double> distinct(values.begin(), values.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t d = distinct.size();
  if (k > d) {
    throw ArgumentError("k = " + std::to_string(k) + " exceeds the " + std::to_string(d) + " distinct value(s)");
  }

  std::vector<double> centroids(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto rank = static_cast<std::size_t>(std::floor((static_cast<double>(i) + 0.5) * static_cast<double>(d) /
                                                          static_cast<double>(k)));
    centroids[i] = distinct[std::min(rank, d - 1)];
  }

  ClusteringResult r;
  r.k = k;
  r.assignment.assign(values.size(), 0);
  for (std::size_t iter = 0; iter < std::max<std::size_t>(max_iters, 1); ++iter) {
    bool changed = iter == 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto j = nearest(values[i], centroids);
      if (j != r.assignment[i]) {
        r.assignment[i] = j;
        changed = true;
      }
    }
    r.objective_history.push_back(within_cluster_ss(values, r.assignment, centroids));
    r.iterations = iter + 1;

    std::vector<double> sum(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum[r.assignment[i]] += values[i];
      ++count[r.assignment[i]];
    }
    double shift = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (count[j] == 0) continue;  // empty cluster keeps its centroid
      const double next = sum[j] / static_cast<double>(count[j]);
      shift = std::max(shift, std::abs(next - centroids[j]));
      centroids[j] = next;
    }
    if (!changed || shift <= tol) {
      if (shift > 0) {
        // Report assignment and objective against the final centroids.
        for (std::size_t i = 0; i < values.size(); ++i) r.assignment[i] = nearest(values[i], centroids);
        r.objective_history.push_back(within_cluster_ss(values, r.assignment, centroids));
      }
      break;
    }
  }

  // Centroids stay ordered in one dimension, but sort defensively and remap.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return centroids[a] < centroids[b]; });
  std::vector<std::size_t> rank(k);
  for (std::size_t j = 0; j < k; ++j) rank[order[j]] = j;
  for (auto& a : r.assignment) a = rank[a];

  r.clusters.assign(k, Cluster{});
  for (std::size_t j = 0; j < k; ++j) {
    r.clusters[j].centroid = centroids[order[j]];
    r.clusters[j].min = std::numeric_limits<double>::infinity();
    r.clusters[j].max = -std::numeric_limits<double>::infinity();
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& c = r.clusters[r.assignment[i]];
    ++c.count;
    c.min = std::min(c.min, values[i]);
    c.max = std::max(c.max, values[i]);
  }
  for (auto& c : r.clusters) {
    if (c.count == 0) c.min = c.max = c.centroid;
    c.share = static_cast<double>(c.count) / static_cast<double>(values.size());
  }
  return r;
}

}  // namespace casesift::analytics
