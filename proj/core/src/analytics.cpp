// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/analytics.hpp"

#include <algorithm>
#include <set>

#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "sectioned.hpp"

namespace casesift::defaults {
extern const std::string_view court_tiers_cfg;
}

namespace casesift::analytics {

namespace {

int year_of(const corpus::Date& d) { return static_cast<int>(d.year()); }

std::optional<std::pair<int, int>> year_range(const corpus::Dataset& dataset) {
  std::optional<std::pair<int, int>> range;
  for (const auto& c : dataset) {
    if (!c.hearing_date) continue;
    const int y = year_of(*c.hearing_date);
    if (!range) {
      range = {y, y};
    } else {
      range->first = std::min(range->first, y);
      range->second = std::max(range->second, y);
    }
  }
  return range;
}

}  // namespace

YearSeries counts_by_year(const corpus::Dataset& dataset) {
  YearSeries s;
  const auto range = year_range(dataset);
  if (range) {
    for (int y = range->first; y <= range->second; ++y) s.counts.emplace_back(y, 0);
  }
  for (const auto& c : dataset) {
    if (!c.hearing_date) {
      ++s.undated;
      continue;
    }
    ++s.counts[static_cast<std::size_t>(year_of(*c.hearing_date) - range->first)].second;
  }
  return s;
}

std::vector<CourtCount> counts_by_court(const corpus::Dataset& dataset) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& c : dataset) ++counts[c.court];
  std::vector<CourtCount> out;
  for (auto& [court, n] : counts) out.push_back({court, n});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  return out;
}

CourtTierMap::CourtTierMap(std::vector<std::pair<std::string, std::vector<std::string>>> tiers) {
  std::set<std::string> names;
  for (auto& [tier, courts] : tiers) {
    if (tier.empty()) throw ConfigError("empty tier label");
    if (tier == kUnmappedTier) throw ConfigError("tier label '" + tier + "' is reserved");
    if (!names.insert(tier).second) throw ConfigError("duplicate tier '" + tier + "'");
    tiers_.push_back(tier);
    for (auto& court : courts) {
      if (auto [it, fresh] = tier_of_.emplace(court, tier); !fresh) {
        throw ConfigError("court '" + court + "' listed under both '" + it->second + "' and '" + tier + "'");
      }
    }
  }
}

CourtTierMap CourtTierMap::from_config_text(std::string_view text, const std::string& source) {
  std::vector<std::pair<std::string, std::vector<std::string>>> tiers;
  std::map<std::string, int> court_line;
  std::map<std::string, int> tier_line;
  for (const auto& section : detail::parse_sections(text, source)) {
    if (section.name == kUnmappedTier) {
      throw ConfigError("tier label 'unmapped' is reserved", source, section.line, 1);
    }
    if (auto [it, fresh] = tier_line.emplace(section.name, section.line); !fresh) {
      throw ConfigError("duplicate tier '" + section.name + "' (first seen on line " + std::to_string(it->second) + ")",
                        source, section.line, 1);
    }
    std::vector<std::string> courts;
    for (const auto& e : section.entries) {
      if (auto [it, fresh] = court_line.emplace(e.text, e.line); !fresh) {
        throw ConfigError("court '" + e.text + "' already mapped on line " + std::to_string(it->second), source,
                          e.line, 1);
      }
      courts.push_back(e.text);
    }
    tiers.emplace_back(section.name, std::move(courts));
  }
  return CourtTierMap(std::move(tiers));
}

CourtTierMap CourtTierMap::load(const std::filesystem::path& path) {
  return from_config_text(io::read_file(path), path.string());
}

const CourtTierMap& CourtTierMap::default_map() {
  static const CourtTierMap map = from_config_text(defaults::court_tiers_cfg, "court_tiers.cfg");
  return map;
}

std::vector<std::string> CourtTierMap::courts() const {
  std::vector<std::string> out;
  for (const auto& [court, tier] : tier_of_) out.push_back(court);
  return out;
}

std::string_view CourtTierMap::tier_of(std::string_view court) const {
  auto it = tier_of_.find(court);
  return it == tier_of_.end() ? kUnmappedTier : std::string_view(it->second);
}

std::string_view tier_of(std::string_view court, const CourtTierMap& map) { return map.tier_of(court); }

std::vector<TierYearCount> counts_by_tier_year(const corpus::Dataset& dataset, const CourtTierMap& map) {
  std::vector<std::string> labels(map.tiers().begin(), map.tiers().end());
  labels.emplace_back(kUnmappedTier);
  const auto range = year_range(dataset);
  if (!range) return {};
  const auto years = static_cast<std::size_t>(range->second - range->first + 1);
  std::vector<TierYearCount> out;
  out.reserve(labels.size() * years);
  std::map<std::string_view, std::size_t> base;
  for (const auto& label : labels) {
    base[label] = out.size();
    for (int y = range->first; y <= range->second; ++y) out.push_back({label, y, 0});
  }
  for (const auto& c : dataset) {
    if (!c.hearing_date) continue;
    const auto row = base.at(map.tier_of(c.court)) + static_cast<std::size_t>(year_of(*c.hearing_date) - range->first);
    ++out[row].count;
  }
  return out;
}

DescriptiveStats word_count_stats(const corpus::Dataset& dataset) {
  std::vector<double> v;
  v.reserve(dataset.size());
  for (const auto& c : dataset) v.push_back(static_cast<double>(c.word_count));
  return describe(v);
}

AnalysisReport analyze(const corpus::Dataset& dataset, const CourtTierMap& tiers, const AnalysisOptions& options) {
  AnalysisReport r;
  r.by_year = counts_by_year(dataset);
  r.by_court = counts_by_court(dataset);
  r.by_tier = counts_by_tier_year(dataset, tiers);
  if (r.by_year.undated > 0) {
    r.notes.push_back(std::to_string(r.by_year.undated) + " undated case(s) left out of the yearly series");
  }

  std::vector<std::pair<double, double>> points;
  for (const auto& [y, n] : r.by_year.counts) points.emplace_back(y, static_cast<double>(n));
  if (points.size() >= 2) {
    r.regression = linear_regression(points);
  } else {
    r.notes.emplace_back("trend regression skipped: fewer than two distinct years");
  }

  if (dataset.empty()) {
    r.notes.emplace_back("word-count statistics and clustering skipped: empty dataset");
    return r;
  }
  r.word_stats = word_count_stats(dataset);
  std::vector<double> words;
  for (const auto& c : dataset) words.push_back(static_cast<double>(c.word_count));
  const auto distinct = std::set<double>(words.begin(), words.end()).size();
  for (auto k : options.kmeans_k) {
    if (k == 0 || k > distinct) {
      r.notes.push_back("k-means with k = " + std::to_string(k) + " skipped: " + std::to_string(distinct) +
                        " distinct word count(s)");
      continue;
    }
    r.clusterings.push_back(kmeans_1d(words, k));
  }
  return r;
}

namespace {

void write_assignment(const std::filesystem::path& path, const corpus::Dataset& dataset, const ClusteringResult& c) {
  std::vector<csv::Row> rows{{"case_id", "word_count", "cluster"}};
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    rows.push_back({dataset[i].id, std::to_string(dataset[i].word_count), std::to_string(c.assignment[i])});
  }
  csv::write_file(path, rows);
}

}  // namespace

void write_report(const AnalysisReport& report, const corpus::Dataset& dataset, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::vector<csv::Row> by_year{{"year", "count"}};
  for (const auto& [y, n] : report.by_year.counts) by_year.push_back({std::to_string(y), std::to_string(n)});
  csv::write_file(out_dir / "by_year.csv", by_year);

  std::vector<csv::Row> by_court{{"court", "count"}};
  for (const auto& c : report.by_court) by_court.push_back({c.court, std::to_string(c.count)});
  csv::write_file(out_dir / "by_court.csv", by_court);

  std::vector<csv::Row> by_tier{{"tier", "year", "count"}};
  for (const auto& t : report.by_tier) by_tier.push_back({t.tier, std::to_string(t.year), std::to_string(t.count)});
  csv::write_file(out_dir / "by_tier.csv", by_tier);

  nlohmann::json regression = report.regression ? report.regression->to_json() : nlohmann::json(nullptr);
  io::write_file(out_dir / "regression.json", regression.dump(2) + "\n");

  nlohmann::json words = report.word_stats ? report.word_stats->to_json() : nlohmann::json(nullptr);
  io::write_file(out_dir / "wordstats.json", words.dump(2) + "\n");

  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& c : report.clusterings) {
    nlohmann::json entry{{"k", c.k}, {"iterations", c.iterations}, {"objective", c.objective()},
                         {"objective_history", c.objective_history}};
    entry["clusters"] = nlohmann::json::array();
    for (const auto& cl : c.clusters) {
      entry["clusters"].push_back(
          {{"centroid", cl.centroid}, {"min", cl.min}, {"max", cl.max}, {"count", cl.count}, {"share", cl.share}});
    }
    clusters.push_back(std::move(entry));
    write_assignment(out_dir / ("clusters_k" + std::to_string(c.k) + ".csv"), dataset, c);
  }
  io::write_file(out_dir / "clusters.json", clusters.dump(2) + "\n");
  if (!report.clusterings.empty()) {
    write_assignment(out_dir / "clusters.csv", dataset, report.clusterings.front());
  } else {
    csv::write_file(out_dir / "clusters.csv", {{"case_id", "word_count", "cluster"}});
  }

  nlohmann::json summary{{"cases", dataset.size()}, {"undated", report.by_year.undated}, {"notes", report.notes}};
  io::write_file(out_dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace casesift::analytics
