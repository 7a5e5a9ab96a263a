// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "casesift/corpus.hpp"

namespace casesift::keywords {

struct Category {
  std::string name;
  std::vector<std::string> variants;
};

/// Ordered categories of lowercase keyword variants. Variants are unique
/// across the whole catalog and are addressed by their flat index in
/// catalog order.
class KeywordCatalog {
 public:
  /// Lowercases variants; throws ConfigError on an empty category, an empty
  /// variant or a duplicate variant.
  explicit KeywordCatalog(std::vector<Category> categories);

  /// Sectioned text: `[category]` headers followed by one variant per line.
  static KeywordCatalog from_config_text(std::string_view text, const std::string& source = "<catalog>");
  static KeywordCatalog load(const std::filesystem::path& path);
  /// The shipped keywords.cfg.
  static const KeywordCatalog& default_catalog();

  std::span<const Category> categories() const noexcept { return categories_; }
  std::span<const std::string> variants() const noexcept { return variants_; }
  std::size_t variant_count() const noexcept { return variants_.size(); }
  const std::string& variant(std::size_t i) const { return variants_[i]; }
  std::size_t category_of(std::size_t variant_index) const { return category_of_[variant_index]; }
  std::optional<std::size_t> variant_index(std::string_view variant) const;
  std::optional<std::size_t> category_index(std::string_view name) const;

 private:
  std::vector<Category> categories_;
  std::vector<std::string> variants_;
  std::vector<std::size_t> category_of_;
};

/// Per-case occurrence counts, indexed like KeywordCatalog::variants().
struct MatchProfile {
  std::string case_id;
  std::vector<std::uint64_t> counts;

  bool present(std::size_t variant) const { return counts[variant] > 0; }
  std::size_t present_count() const;
};

/// Literal lowercase-substring counts (every start offset counts).
MatchProfile scan_text(std::string case_id, std::string_view text, const KeywordCatalog& catalog);
MatchProfile scan_case(const corpus::Case& c, const KeywordCatalog& catalog);
std::vector<MatchProfile> scan_dataset(const corpus::Dataset& dataset, const KeywordCatalog& catalog,
                                       std::size_t threads = 0);

struct VariantCount {
  std::string variant;
  std::uint64_t count = 0;
};

/// Sum of occurrences per variant, descending by count, ties in catalog order.
std::vector<VariantCount> total_counts(std::span<const MatchProfile> profiles, const KeywordCatalog& catalog);

/// Cases where the variant is the only catalog variant present; same ordering.
std::vector<VariantCount> isolation_counts(std::span<const MatchProfile> profiles,
                                           const KeywordCatalog& catalog);

/// Symmetric case-level co-occurrence counts; diagonal = cases where present.
class CooccurrenceMatrix {
 public:
  explicit CooccurrenceMatrix(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  std::span<const std::string> labels() const noexcept { return labels_; }
  std::uint64_t at(std::size_t i, std::size_t j) const { return cells_[i * size() + j]; }
  std::uint64_t diagonal(std::size_t i) const { return at(i, i); }
  void add(std::size_t i, std::size_t j, std::uint64_t n = 1) { cells_[i * size() + j] += n; }

 private:
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> cells_;
};

CooccurrenceMatrix cooccurrence(std::span<const MatchProfile> profiles, const KeywordCatalog& catalog);

/// A Venn key is either one variant or a whole category (present if any of
/// its variants is). Bare names resolve to a variant first, then a category;
/// the prefixes "variant:" and "category:" force the kind.
struct VennKey {
  enum class Kind { variant, category };
  Kind kind = Kind::variant;
  std::string name;
  std::size_t index = 0;
};

VennKey resolve_venn_key(std::string_view key, const KeywordCatalog& catalog);
bool key_present(const VennKey& key, const MatchProfile& profile, const KeywordCatalog& catalog);

/// Exclusive region counts. regions[mask] counts cases whose set of present
/// keys is exactly `mask` (bit i = keys[i]); regions[0] is the outside count.
struct VennCounts {
  std::vector<VennKey> keys;
  std::vector<std::uint64_t> regions;

  std::uint64_t outside() const { return regions[0]; }
  std::uint64_t region(unsigned mask) const { return regions.at(mask); }
  /// Cases where every key in mask is present (regardless of the others).
  std::uint64_t intersection(unsigned mask) const;
  std::uint64_t total() const;
  std::string region_name(unsigned mask) const;
};

/// Requires 2 or 3 distinct keys; throws ArgumentError otherwise.
VennCounts venn_counts(std::span<const MatchProfile> profiles, const KeywordCatalog& catalog,
                       std::span<const std::string> keys);

nlohmann::json to_json(const VennCounts& venn);

/// A keyword hit in the original text (byte offsets, end exclusive).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t variant = 0;
};

/// Every occurrence of every variant, sorted by (begin, end).
std::vector<Span> match_spans(std::string_view text, const KeywordCatalog& catalog);

// CSV writers for the keyword statistics outputs.
void write_counts_csv(const std::filesystem::path& path, std::span<const VariantCount> counts);
void write_cooccurrence_csv(const std::filesystem::path& path, const CooccurrenceMatrix& m);

}  // namespace casesift::keywords
