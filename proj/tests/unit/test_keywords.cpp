// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <gtest/gtest.h>

#include "casesift/errors.hpp"
#include "casesift/keywords.hpp"
#include "casesift/rng.hpp"
#include "casesift/synthetic.hpp"
#include "test_support.hpp"

using namespace casesift;
using keywords::KeywordCatalog;

namespace {

const KeywordCatalog& catalog() { return KeywordCatalog::default_catalog(); }

// Random text stitched from catalog variants (in random case), fragments of
// them and neutral words.
std::string random_text(Rng& rng) {
  static const std::vector<std::string> noise{"the", "court", "held", "that", "r", "24", "real", "prospect", "of",
                                              "summary", "judg", "mini", "trial", "-", ".", "cpr", "part", "v"};
  std::string out;
  const auto pieces = static_cast<std::uint64_t>(rng.between(0, 40));
  for (std::uint64_t i = 0; i < pieces; ++i) {
    std::string piece = rng.chance(0.3) ? catalog().variant(rng.below(catalog().variant_count()))
                                        : noise[rng.below(noise.size())];
    for (auto& c : piece) {
      if (rng.chance(0.3) && c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
    }
    out += piece;
    out += rng.chance(0.8) ? " " : "";
  }
  return out;
}

std::vector<keywords::MatchProfile> random_profiles(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<keywords::MatchProfile> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(keywords::scan_text("c" + std::to_string(i), random_text(rng), catalog()));
  return out;
}

}  // namespace

TEST(Catalog, DefaultShape) {
  EXPECT_EQ(catalog().categories().size(), 7u);
  EXPECT_EQ(catalog().variant_count(), 34u);
  EXPECT_EQ(catalog().variant(0), "summary judgement");
  EXPECT_EQ(catalog().category_of(2), 1u);
  EXPECT_EQ(catalog().variant_index("mini-trial"), 32u);
}

TEST(Catalog, RejectsBadConfigs) {
  EXPECT_THROW(KeywordCatalog::from_config_text("[a]\nx\n[b]\nX\n"), ConfigError);
  EXPECT_THROW(KeywordCatalog::from_config_text("[a]\n[b]\nx\n"), ConfigError);
  EXPECT_THROW(KeywordCatalog::from_config_text("x\n[a]\ny\n"), ConfigError);
  try {
    KeywordCatalog::from_config_text("[a]\nfoo\n\n[b]\nFOO\n", "cat.cfg");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 5);
  }
}

TEST(Scan, AgreesWithNaiveCounterOnRandomText) {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto text = random_text(rng);
    const auto p = keywords::scan_text("x", text, catalog());
    for (std::size_t v = 0; v < catalog().variant_count(); ++v) {
      ASSERT_EQ(p.counts[v], testkit::naive_count(text, catalog().variant(v))) << text << " / " << catalog().variant(v);
    }
  }
}

TEST(Scan, OverlappingOccurrencesCount) {
  const auto p = keywords::scan_text("x", "No real prospect of success", catalog());
  EXPECT_EQ(p.counts[*catalog().variant_index("no real prospect")], 1u);
  EXPECT_EQ(p.counts[*catalog().variant_index("no real prospect of success")], 1u);
  EXPECT_EQ(p.counts[*catalog().variant_index("real prospect of success")], 1u);
  EXPECT_EQ(p.present_count(), 3u);
}

TEST(Scan, TotalsMatchThePlantedLedger) {
  // Filler never contains a variant, so every hit comes from a planted phrase.
  const auto corpus = synthetic::generate(synthetic::GeneratorSpec::mixed(150, 21));
  std::vector<keywords::MatchProfile> profiles;
  for (std::size_t i = 0; i < corpus.cases.size(); ++i) {
    const auto p = keywords::scan_case(corpus.cases[i], catalog());
    for (std::size_t v = 0; v < catalog().variant_count(); ++v) {
      std::uint64_t expected = 0;
      for (const auto& [phrase, times] : corpus.truth[i].planted) {
        expected += times * testkit::naive_count(phrase, catalog().variant(v));
      }
      ASSERT_EQ(p.counts[v], expected) << corpus.cases[i].id << " / " << catalog().variant(v);
    }
    profiles.push_back(p);
  }
  const auto totals = keywords::total_counts(profiles, catalog());
  for (std::size_t i = 1; i < totals.size(); ++i) EXPECT_GE(totals[i - 1].count, totals[i].count);
}

TEST(Stats, IsolationMatchesBruteForce) {
  const auto profiles = random_profiles(400, 5);
  const auto iso = keywords::isolation_counts(profiles, catalog());
  ASSERT_EQ(iso.size(), catalog().variant_count());
  for (const auto& vc : iso) {
    const auto v = *catalog().variant_index(vc.variant);
    std::uint64_t n = 0;
    for (const auto& p : profiles) {
      bool alone = p.counts[v] > 0;
      for (std::size_t w = 0; w < p.counts.size() && alone; ++w) alone = w == v || p.counts[w] == 0;
      n += alone;
    }
    EXPECT_EQ(vc.count, n) << vc.variant;
  }
}

TEST(Stats, TotalsTieBreakInCatalogOrder) {
  const std::vector<keywords::MatchProfile> none{{"a", std::vector<std::uint64_t>(catalog().variant_count(), 0)}};
  const auto totals = keywords::total_counts(none, catalog());
  for (std::size_t i = 0; i < totals.size(); ++i) EXPECT_EQ(totals[i].variant, catalog().variant(i));
}

TEST(Stats, CooccurrenceInvariants) {
  const auto profiles = random_profiles(1000, 8);
  const auto m = keywords::cooccurrence(profiles, catalog());
  const auto iso = keywords::isolation_counts(profiles, catalog());
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::uint64_t present = 0;
    for (const auto& p : profiles) present += p.present(i);
    EXPECT_EQ(m.diagonal(i), present);
    for (std::size_t j = 0; j < m.size(); ++j) {
      EXPECT_EQ(m.at(i, j), m.at(j, i));
      EXPECT_LE(m.at(i, j), std::min(m.diagonal(i), m.diagonal(j)));
    }
  }
  for (const auto& vc : iso) EXPECT_LE(vc.count, m.diagonal(*catalog().variant_index(vc.variant)));
}

TEST(Venn, RegionsAgreeWithDirectScans) {
  const auto profiles = random_profiles(500, 13);
  const std::vector<std::string> keys{"summary judgment", "category:civil procedure rules part 24", "mini trial"};
  const auto venn = keywords::venn_counts(profiles, catalog(), keys);
  ASSERT_EQ(venn.keys.size(), 3u);
  EXPECT_EQ(venn.keys[0].kind, keywords::VennKey::Kind::variant);
  EXPECT_EQ(venn.keys[1].kind, keywords::VennKey::Kind::category);
  EXPECT_EQ(venn.keys[2].kind, keywords::VennKey::Kind::variant);
  EXPECT_EQ(venn.total(), profiles.size());

  const auto sj = *catalog().variant_index("summary judgment");
  const auto mini = *catalog().variant_index("mini trial");
  auto has_cpr = [&](const keywords::MatchProfile& p) {
    for (std::size_t v = 0; v < p.counts.size(); ++v) {
      if (catalog().category_of(v) == 2 && p.counts[v] > 0) return true;
    }
    return false;
  };
  for (unsigned mask = 0; mask < 8; ++mask) {
    std::uint64_t exact = 0, all = 0;
    for (const auto& p : profiles) {
      const unsigned got = (p.present(sj) ? 1u : 0u) | (has_cpr(p) ? 2u : 0u) | (p.present(mini) ? 4u : 0u);
      exact += got == mask;
      all += (got & mask) == mask;
    }
    EXPECT_EQ(venn.region(mask), exact) << mask;
    EXPECT_EQ(venn.intersection(mask), all) << mask;
  }
  // |A u B u C| by inclusion-exclusion equals the non-outside total.
  const auto I = [&](unsigned m) { return static_cast<std::int64_t>(venn.intersection(m)); };
  const auto unions = I(1) + I(2) + I(4) - I(3) - I(5) - I(6) + I(7);
  EXPECT_EQ(unions, static_cast<std::int64_t>(venn.total() - venn.outside()));

  const auto j = keywords::to_json(venn);
  EXPECT_EQ(j["total"], profiles.size());
  EXPECT_EQ(j["regions"]["summary judgment & civil procedure rules part 24"], venn.region(3));
}

TEST(Venn, RejectsBadKeys) {
  const auto profiles = random_profiles(5, 1);
  EXPECT_THROW(keywords::venn_counts(profiles, catalog(), std::vector<std::string>{"summary judgment"}), ArgumentError);
  EXPECT_THROW(keywords::venn_counts(profiles, catalog(), std::vector<std::string>{"cpr 24", "no such"}), ArgumentError);
  EXPECT_THROW(keywords::venn_counts(profiles, catalog(), std::vector<std::string>{"cpr 24", "CPR 24"}), ArgumentError);
  EXPECT_THROW(keywords::venn_counts(profiles, catalog(), std::vector<std::string>{"a", "b", "c", "d"}), ArgumentError);
}

TEST(Spans, CoverEveryOccurrenceInOriginalText) {
  const std::string text = "Per Easyair v Opal, NO REAL PROSPECT of success; summary judgment.";
  const auto spans = keywords::match_spans(text, catalog());
  std::size_t expected = 0;
  for (std::size_t v = 0; v < catalog().variant_count(); ++v) expected += testkit::naive_count(text, catalog().variant(v));
  ASSERT_EQ(spans.size(), expected);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    EXPECT_EQ(testkit::naive_lower(text.substr(s.begin, s.end - s.begin)), catalog().variant(s.variant));
    if (i > 0) {
      EXPECT_LE(spans[i - 1].begin, s.begin);
    }
  }
}
