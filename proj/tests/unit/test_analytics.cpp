// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <limits>

#include "casesift/analytics.hpp"
#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/rng.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace casesift;
using namespace casesift::analytics;
using Points = std::vector<std::pair<double, double>>;

namespace {

corpus::Case dated(std::string id, std::string court, int year) {
  return corpus::make_case(std::move(id), std::move(court),
                           corpus::Date{std::chrono::year{year}, std::chrono::month{6}, std::chrono::day{1}}, "a b");
}

}  // namespace

TEST(Regression, NoiselessLineIsRecovered) {
  Points pts;
  for (int x = 1999; x <= 2023; ++x) pts.push_back({static_cast<double>(x), 6.0 * x - 11000});
  const auto r = linear_regression(pts);
  EXPECT_NEAR(r.slope, 6.0, 1e-9);
  EXPECT_NEAR(r.intercept, -11000, 1e-6);
  EXPECT_NEAR(r.r_squared, 1.0, 1e-9);
  ASSERT_TRUE(r.p_value);
  EXPECT_EQ(*r.p_value, 0.0);
  EXPECT_EQ(r.n, 25u);
}

TEST(Regression, AgreesWithNormalEquationsOnRandomSeries) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    Points pts;
    const double a = rng.unit() * 20 - 10, b = rng.unit() * 100;
    for (int i = 0; i < 20; ++i) {
      const double x = rng.unit() * 50;
      pts.push_back({x, a * x + b + (rng.unit() - 0.5) * 40});
    }
    const auto got = linear_regression(pts);
    const auto want = testkit::normal_equations(pts);
    EXPECT_NEAR(got.slope, want.slope, 1e-9);
    EXPECT_NEAR(got.intercept, want.intercept, 1e-9);
    EXPECT_NEAR(got.r_squared, want.r2, 1e-9);
  }
}

TEST(Regression, StrongTrendIsSignificant) {
  Rng rng(3);
  Points pts;
  for (int x = 1999; x <= 2023; ++x) pts.push_back({static_cast<double>(x), 6.0 * (x - 1999) + 20 + (rng.unit() - 0.5) * 20});
  const auto r = linear_regression(pts);
  ASSERT_TRUE(r.p_value);
  EXPECT_LT(*r.p_value, 0.005);
  EXPECT_NEAR(r.slope, 6.0, 1.0);
}

TEST(Regression, PValueMatchesBoostStudentT) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Points pts;
    const std::size_t n = 3 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i), rng.unit() * 10 + 0.05 * i});
    const auto r = linear_regression(pts);
    const boost::math::students_t dist(static_cast<double>(n - 2));
    const double want = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t_statistic)));
    ASSERT_TRUE(r.p_value);
    EXPECT_NEAR(*r.p_value, want, 1e-10);
  }
}

TEST(Regression, DegenerateInputs) {
  EXPECT_THROW(linear_regression(Points{{1, 2}}), DegenerateInputError);
  EXPECT_THROW(linear_regression(Points{{1, 2}, {1, 3}, {1, 4}}), DegenerateInputError);
  const auto flat = linear_regression(Points{{1, 5}, {2, 5}, {3, 5}});
  EXPECT_TRUE(flat.constant_response);
  EXPECT_EQ(flat.slope, 0.0);
  EXPECT_EQ(flat.r_squared, 0.0);
  const auto two = linear_regression(Points{{1, 1}, {2, 3}});
  EXPECT_FALSE(two.p_value);
  EXPECT_NEAR(two.slope, 2.0, 1e-12);
  EXPECT_TRUE(two.to_json()["p_value"].is_null());
}

TEST(IncompleteBeta, MatchesBoost) {
  for (double a : {0.5, 1.0, 2.5, 10.0, 40.0}) {
    for (double b : {0.5, 1.0, 3.0, 12.0}) {
      for (double x : {0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0}) {
        EXPECT_NEAR(regularized_incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-12) << a << " " << b << " " << x;
      }
    }
  }
  EXPECT_THROW(regularized_incomplete_beta(0, 1, 0.5), ArgumentError);
  EXPECT_THROW(regularized_incomplete_beta(1, 1, 1.5), ArgumentError);
  EXPECT_EQ(student_t_two_sided_p(std::numeric_limits<double>::infinity(), 5), 0.0);
  EXPECT_NEAR(student_t_two_sided_p(0, 5), 1.0, 1e-15);
}

TEST(Describe, AgreesWithBrutePercentiles) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + rng.below(40));
    for (auto& x : v) x = std::floor(rng.unit() * 1000);
    const auto d = describe(v);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&](double q) {
      const double pos = q * static_cast<double>(sorted.size() - 1);
      const auto lo = static_cast<std::size_t>(pos);
      const auto hi = std::min(lo + 1, sorted.size() - 1);
      return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    EXPECT_EQ(d.n, v.size());
    EXPECT_NEAR(d.mean, mean, 1e-9);
    EXPECT_NEAR(d.stddev, std::sqrt(var), 1e-9);
    EXPECT_EQ(d.min, sorted.front());
    EXPECT_EQ(d.max, sorted.back());
    EXPECT_NEAR(d.q25, pct(0.25), 1e-9);
    EXPECT_NEAR(d.median, pct(0.5), 1e-9);
    EXPECT_NEAR(d.q75, pct(0.75), 1e-9);
  }
  EXPECT_THROW(describe(std::vector<double>{}), ArgumentError);
}

TEST(KMeans, SeparatedFixtureIsOptimal) {
  const std::vector<double> v{1, 2, 3, 100, 101, 102};
  const auto r = kmeans_1d(v, 2);
  EXPECT_EQ(r.centroids(), (std::vector<double>{2, 101}));
  EXPECT_NEAR(r.objective(), testkit::exhaustive_kmeans_optimum(v, 2), 1e-9);
  EXPECT_NEAR(r.objective(), 4.0, 1e-12);
  EXPECT_EQ(r.assignment, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1}));
  EXPECT_EQ(r.clusters[1].count, 3u);
  EXPECT_NEAR(r.clusters[0].share, 0.5, 1e-12);
}

TEST(KMeans, RandomInstancesAgainstExhaustiveSearch) {
  Rng rng(2024);
  int optimal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(1 + rng.below(12));
    for (auto& x : v) x = static_cast<double>(rng.below(50));
    std::vector<double> distinct = v;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(3, distinct.size()));
    const auto r = kmeans_1d(v, k);
    const auto cents = r.centroids();
    // The objective never increases between assignment steps.
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
      EXPECT_LE(r.objective_history[i], r.objective_history[i - 1] + 1e-9);
    }
    // Every value sits with its nearest centroid.
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (double c : cents) EXPECT_LE(std::fabs(v[i] - cents[r.assignment[i]]), std::fabs(v[i] - c) + 1e-12);
    }
    EXPECT_NEAR(r.objective(), within_cluster_ss(v, r.assignment, cents), 1e-9);
    const double best = testkit::exhaustive_kmeans_optimum(v, k);
    EXPECT_GE(r.objective(), best - 1e-9);
    optimal += std::fabs(r.objective() - best) <= 1e-9;
  }
  EXPECT_GE(optimal, 80);
}

TEST(KMeans, RejectsBadK) {
  const std::vector<double> v{1, 1, 2};
  EXPECT_THROW(kmeans_1d(v, 0), ArgumentError);
  EXPECT_THROW(kmeans_1d(v, 3), ArgumentError);
  EXPECT_EQ(kmeans_1d(v, 2).centroids(), (std::vector<double>{1, 2}));
}

TEST(Tiers, DefaultMapResolvesEveryListedCourt) {
  const auto& map = CourtTierMap::default_map();
  EXPECT_EQ(map.court_count(), 29u);
  EXPECT_EQ(map.tiers().size(), 5u);
  EXPECT_EQ(map.tier_of("United Kingdom Supreme Court"), "Tier 1: Court of Last Resort");
  EXPECT_EQ(map.tier_of("England and Wales Court of Appeal (Civil Division)"), "Tier 2: Appellate Court");
  EXPECT_EQ(map.tier_of("England and Wales High Court (Chancery Division)"), "Tier 3: First Instance Court");
  EXPECT_EQ(map.tier_of("United Kingdom VAT & Duties Tribunals (Excise)"), "Tier 3: First Instance Tribunal");
  EXPECT_EQ(map.tier_of("Scottish Court of Session"), kUnmappedTier);
  EXPECT_EQ(map.tier_of("united kingdom supreme court"), kUnmappedTier);
}

TEST(Tiers, ConfigErrors) {
  EXPECT_THROW(CourtTierMap::from_config_text("[A]\nx\n[B]\nx\n"), ConfigError);
  EXPECT_THROW(CourtTierMap::from_config_text("[A]\nx\n[A]\ny\n"), ConfigError);
  EXPECT_THROW(CourtTierMap::from_config_text("[unmapped]\nx\n"), ConfigError);
}

TEST(Counts, ByYearCourtAndTier) {
  const corpus::Dataset ds("d", "t",
                           {dated("a", "United Kingdom Supreme Court", 2001), dated("b", "Other", 2001),
                            dated("c", "England and Wales High Court (Chancery Division)", 2004),
                            corpus::make_case("d", "Other", std::nullopt, "x")});
  const auto years = counts_by_year(ds);
  EXPECT_EQ(years.counts, (std::vector<std::pair<int, std::uint64_t>>{{2001, 2}, {2002, 0}, {2003, 0}, {2004, 1}}));
  EXPECT_EQ(years.undated, 1u);

  const auto courts = counts_by_court(ds);
  ASSERT_EQ(courts.size(), 3u);
  EXPECT_EQ(courts[0].court, "Other");
  EXPECT_EQ(courts[0].count, 2u);
  EXPECT_EQ(courts[1].court, "England and Wales High Court (Chancery Division)");

  const auto tiers = counts_by_tier_year(ds, CourtTierMap::default_map());
  EXPECT_EQ(tiers.size(), 6u * 4u);
  std::uint64_t total = 0;
  for (const auto& t : tiers) total += t.count;
  EXPECT_EQ(total, 3u);
  EXPECT_EQ(tiers.back().tier, kUnmappedTier);
  EXPECT_EQ(tiers[0].tier, "Tier 1: Court of Last Resort");
  EXPECT_EQ(tiers[0].count, 1u);
}

TEST(Report, WritesEveryOutput) {
  std::vector<corpus::Case> cases;
  Rng rng(1);
  for (int i = 0; i < 40; ++i) {
    auto c = dated("c" + std::to_string(i), i % 2 ? "United Kingdom Supreme Court" : "Other", 2000 + i % 10);
    c.text = std::string(static_cast<std::size_t>(2 * (1 + rng.below(300))), 'w');
    for (std::size_t j = 1; j < c.text.size(); j += 2) c.text[j] = ' ';
    c.word_count = c.text.size() / 2;
    cases.push_back(c);
  }
  const corpus::Dataset ds("d", "t", cases);
  AnalysisOptions opt;
  opt.kmeans_k = {2, 3, 100};
  const auto report = analyze(ds, CourtTierMap::default_map(), opt);
  EXPECT_EQ(report.clusterings.size(), 2u);
  EXPECT_FALSE(report.notes.empty());
  ASSERT_TRUE(report.regression);
  testkit::TempDir dir;
  write_report(report, ds, dir.path());
  for (const char* f : {"by_year.csv", "by_court.csv", "by_tier.csv", "regression.json", "wordstats.json",
                        "clusters.json", "clusters.csv", "clusters_k2.csv", "clusters_k3.csv", "summary.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto rows = csv::read_file(dir / "clusters.csv");
  EXPECT_EQ(rows[0], (csv::Row{"case_id", "word_count", "cluster"}));
  EXPECT_EQ(rows.size(), 41u);
  EXPECT_EQ(csv::read_file(dir / "by_year.csv").size(), 11u);
}
