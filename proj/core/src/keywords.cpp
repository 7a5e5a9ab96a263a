// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/keywords.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/parallel.hpp"
#include "casesift/text.hpp"
#include "sectioned.hpp"

namespace casesift::defaults {
extern const std::string_view keywords_cfg;
}

namespace casesift::keywords {

KeywordCatalog::KeywordCatalog(std::vector<Category> categories) : categories_(std::move(categories)) {
  std::set<std::string> seen;
  for (std::size_t ci = 0; ci < categories_.size(); ++ci) {
    auto& cat = categories_[ci];
    if (cat.variants.empty()) throw ConfigError("category '" + cat.name + "' has no variants");
    for (auto& v : cat.variants) {
      v = text::to_lower(text::trim(v));
      if (v.empty()) throw ConfigError("empty variant in category '" + cat.name + "'");
      if (!seen.insert(v).second) throw ConfigError("duplicate variant '" + v + "'");
      variants_.push_back(v);
      category_of_.push_back(ci);
    }
  }
}

KeywordCatalog KeywordCatalog::from_config_text(std::string_view text, const std::string& source) {
  std::vector<Category> cats;
  std::map<std::string, int> first_line;
  for (const auto& section : detail::parse_sections(text, source)) {
    if (section.entries.empty()) {
      throw ConfigError("category '" + section.name + "' has no variants", source, section.line, 1);
    }
    Category cat{section.name, {}};
    for (const auto& e : section.entries) {
      auto v = text::to_lower(e.text);
      if (auto [it, fresh] = first_line.emplace(v, e.line); !fresh) {
        throw ConfigError("duplicate variant '" + v + "' (first seen on line " + std::to_string(it->second) + ")",
                          source, e.line, 1);
      }
      cat.variants.push_back(std::move(v));
    }
    cats.push_back(std::move(cat));
  }
  return KeywordCatalog(std::move(cats));
}

KeywordCatalog KeywordCatalog::load(const std::filesystem::path& path) {
  return from_config_text(io::read_file(path), path.string());
}

const KeywordCatalog& KeywordCatalog::default_catalog() {
  static const KeywordCatalog catalog = from_config_text(defaults::keywords_cfg, "keywords.cfg");
  return catalog;
}

std::optional<std::size_t> KeywordCatalog::variant_index(std::string_view variant) const {
  auto it = std::find(variants_.begin(), variants_.end(), variant);
  if (it == variants_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - variants_.begin());
}

std::optional<std::size_t> KeywordCatalog::category_index(std::string_view name) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t MatchProfile::present_count() const {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
}

MatchProfile scan_text(std::string case_id, std::string_view text, const KeywordCatalog& catalog) {
  const auto lowered = text::to_lower(text);
  MatchProfile p{std::move(case_id), std::vector<std::uint64_t>(catalog.variant_count(), 0)};
  for (std::size_t i = 0; i < catalog.variant_count(); ++i) {
    p.counts[i] = text::count_occurrences(lowered, catalog.variant(i));
  }
  return p;
}

MatchProfile scan_case(const corpus::Case& c, const KeywordCatalog& catalog) { return scan_text(c.id, c.text, catalog); }

std::vector<MatchProfile> scan_dataset(const corpus::Dataset& dataset, const KeywordCatalog& catalog,
                                       std::size_t threads) {
  std::vector<MatchProfile> profiles(dataset.size());
  parallel_for(dataset.size(), [&](std::size_t i) { profiles[i] = scan_case(dataset[i], catalog); }, threads);
  return profiles;
}

namespace {

std::vector<VariantCount> ordered(const KeywordCatalog& catalog, const std::vector<std::uint64_t>& counts) {
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  std::vector<VariantCount> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back({catalog.variant(i), counts[i]});
  return out;
}

}  // namespace

std::vector<VariantCount> total_counts(std::span<const MatchProfile> profiles, const KeywordCatalog& catalog) {
  std::vector<std::uint64_t> sums(catalog.variant_count(), 0);
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += p.counts[i];
  }
  return ordered(catalog, sums);
}

std::vector<VariantCount> isolation_counts(std::span<const MatchProfile> profiles, const KeywordCatalog& catalog) {
  std::vector<std::uint64_t> iso(catalog.variant_count(), 0);
  for (const auto& p : profiles) {
    std::size_t present = 0, last = 0;
    for (std::size_t i = 0; i < p.counts.size(); ++i) {
      if (p.counts[i] > 0) {
        ++present;
        last = i;
      }
    }
    if (present == 1) ++iso[last];
  }
  return ordered(catalog, iso);
}

CooccurrenceMatrix::CooccurrenceMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), cells_(labels_.size() * labels_.size(), 0) {}

CooccurrenceMatrix cooccurrence(std::span<const MatchProfile> profiles, const KeywordCatalog& catalog) {
  CooccurrenceMatrix m({catalog.variants().begin(), catalog.variants().end()});
  std::vector<std::size_t> present;
  for (const auto& p : profiles) {
    present.clear();
    for (std::size_t i = 0; i < p.counts.size(); ++i) {
      if (p.counts[i] > 0) present.push_back(i);
    }
    for (auto i : present) {
      for (auto j : present) m.add(i, j);
    }
  }
  return m;
}

VennKey resolve_venn_key(std::string_view key, const KeywordCatalog& catalog) {
  auto k = text::trim(key);
  constexpr std::string_view kVariant = "variant:", kCategory = "category:";
  const bool force_variant = k.starts_with(kVariant);
  const bool force_category = k.starts_with(kCategory);
  if (force_variant) k.remove_prefix(kVariant.size());
  if (force_category) k.remove_prefix(kCategory.size());
  const auto name = text::to_lower(text::trim(k));
  if (!force_category) {
    if (auto v = catalog.variant_index(name)) return {VennKey::Kind::variant, name, *v};
  }
  if (!force_variant) {
    for (std::size_t i = 0; i < catalog.categories().size(); ++i) {
      if (text::to_lower(catalog.categories()[i].name) == name) return {VennKey::Kind::category, name, i};
    }
  }
  throw ArgumentError("unknown Venn key '" + std::string(key) + "'");
}

bool key_present(const VennKey& key, const MatchProfile& profile, const KeywordCatalog& catalog) {
  if (key.kind == VennKey::Kind::variant) return profile.present(key.index);
  for (std::size_t i = 0; i < catalog.variant_count(); ++i) {
    if (catalog.category_of(i) == key.index && profile.present(i)) return true;
  }
  return false;
}

std::uint64_t VennCounts::intersection(unsigned mask) const {
  std::uint64_t n = 0;
  for (unsigned m = 0; m < regions.size(); ++m) {
    if ((m & mask) == mask) n += regions[m];
  }
  return n;
}

std::uint64_t VennCounts::total() const { return std::accumulate(regions.begin(), regions.end(), std::uint64_t{0}); }

std::string VennCounts::region_name(unsigned mask) const {
  if (mask == 0) return "outside";
  std::vector<std::string> names;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (mask & (1u << i)) names.push_back(keys[i].name);
  }
  return text::join(names, " & ");
}

VennCounts venn_counts(std::span<const MatchProfile> profiles, const KeywordCatalog& catalog,
                       std::span<const std::string> keys) {
  if (keys.size() < 2 || keys.size() > 3) {
    throw ArgumentError("Venn counts need 2 or 3 keys, got " + std::to_string(keys.size()));
  }
  VennCounts venn;
  for (const auto& k : keys) {
    auto resolved = resolve_venn_key(k, catalog);
    for (const auto& prev : venn.keys) {
      if (prev.kind == resolved.kind && prev.index == resolved.index) {
        throw ArgumentError("duplicate Venn key '" + resolved.name + "'");
      }
    }
    venn.keys.push_back(std::move(resolved));
  }
  venn.regions.assign(std::size_t{1} << venn.keys.size(), 0);
  for (const auto& p : profiles) {
    unsigned mask = 0;
    for (std::size_t i = 0; i < venn.keys.size(); ++i) {
      if (key_present(venn.keys[i], p, catalog)) mask |= 1u << i;
    }
    ++venn.regions[mask];
  }
  return venn;
}

nlohmann::json to_json(const VennCounts& venn) {
  nlohmann::json keys = nlohmann::json::array();
  for (const auto& k : venn.keys) {
    keys.push_back({{"name", k.name}, {"kind", k.kind == VennKey::Kind::variant ? "variant" : "category"}});
  }
  nlohmann::json regions = nlohmann::json::object();
  for (unsigned m = 1; m < venn.regions.size(); ++m) regions[venn.region_name(m)] = venn.regions[m];
  return {{"keys", keys}, {"regions", regions}, {"outside", venn.outside()}, {"total", venn.total()}};
}

std::vector<Span> match_spans(std::string_view text, const KeywordCatalog& catalog) {
  const auto lowered = text::to_lower(text);
  std::vector<Span> spans;
  for (std::size_t v = 0; v < catalog.variant_count(); ++v) {
    for (auto pos : text::find_all(lowered, catalog.variant(v))) {
      spans.push_back({pos, pos + catalog.variant(v).size(), v});
    }
  }
  std::sort(spans.begin(), spans.end(), [](const Span& a, const Span& b) {
    return a.begin != b.begin ? a.begin < b.begin : (a.end != b.end ? a.end < b.end : a.variant < b.variant);
  });
  return spans;
}

void write_counts_csv(const std::filesystem::path& path, std::span<const VariantCount> counts) {
  std::vector<csv::Row> rows{{"variant", "count"}};
  for (const auto& c : counts) rows.push_back({c.variant, std::to_string(c.count)});
  csv::write_file(path, rows);
}

void write_cooccurrence_csv(const std::filesystem::path& path, const CooccurrenceMatrix& m) {
  std::vector<csv::Row> rows;
  csv::Row header{""};
  for (const auto& l : m.labels()) header.push_back(l);
  rows.push_back(std::move(header));
  for (std::size_t i = 0; i < m.size(); ++i) {
    csv::Row row{m.labels()[i]};
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(std::to_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  csv::write_file(path, rows);
}

}  // namespace casesift::keywords
