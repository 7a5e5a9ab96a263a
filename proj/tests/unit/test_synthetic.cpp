// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <gtest/gtest.h>

#include <regex>
#include <set>

#include "casesift/corpus.hpp"
#include "casesift/errors.hpp"
#include "casesift/io.hpp"
#include "casesift/keywords.hpp"
#include "casesift/synthetic.hpp"
#include "test_support.hpp"

using namespace casesift;

namespace {

std::string read_tree(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += std::filesystem::relative(f, dir).string() + "\n" + io::read_file(f);
  return all;
}

}  // namespace

TEST(Synthetic, SameSpecGivesByteIdenticalCorpora) {
  testkit::TempDir a, b;
  synthetic::write(synthetic::generate(synthetic::GeneratorSpec::mixed(10, 7)), a.path());
  synthetic::write(synthetic::generate(synthetic::GeneratorSpec::mixed(10, 7)), b.path());
  EXPECT_EQ(read_tree(a.path()), read_tree(b.path()));
  testkit::TempDir c;
  synthetic::write(synthetic::generate(synthetic::GeneratorSpec::mixed(10, 8)), c.path());
  EXPECT_NE(read_tree(a.path()), read_tree(c.path()));
}

TEST(Synthetic, LabelCountsHonoured) {
  testkit::TempDir dir;
  synthetic::write(synthetic::generate(synthetic::GeneratorSpec::with_labels(5, 5, 1)), dir.path());
  const auto truth = synthetic::read_truth(dir.path());
  ASSERT_EQ(truth.size(), 10u);
  EXPECT_EQ(std::count_if(truth.begin(), truth.end(), [](const auto& t) { return t.label == Label::sj; }), 5);
}

TEST(Synthetic, RoundTripsThroughXml) {
  const auto corpus = synthetic::generate(synthetic::GeneratorSpec::mixed(60, 2));
  for (const auto& c : corpus.cases) {
    ASSERT_EQ(corpus::parse_case_document(corpus::serialize_case_document(c)), c) << c.id;
  }
  testkit::TempDir dir;
  synthetic::write(corpus, dir.path());
  const auto loaded = corpus::load_corpus(dir / "cases");
  EXPECT_TRUE(loaded.skipped.empty());
  ASSERT_EQ(loaded.dataset.size(), corpus.cases.size());
  for (const auto& c : corpus.cases) EXPECT_EQ(*loaded.dataset.find(c.id), c);
}

TEST(Synthetic, TruthFilesRoundTrip) {
  const auto corpus = synthetic::generate(synthetic::GeneratorSpec::mixed(40, 9));
  testkit::TempDir dir;
  synthetic::write(corpus, dir.path());
  const auto back = synthetic::read_truth(dir.path());
  ASSERT_EQ(back.size(), corpus.truth.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& a = corpus.truth[i];
    const auto& b = back[i];
    EXPECT_EQ(a.case_id, b.case_id);
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.label, b.label);
    EXPECT_EQ(a.regex_match, b.regex_match);
    EXPECT_EQ(a.matrix_label, b.matrix_label);
    EXPECT_EQ(a.rule, b.rule);
    EXPECT_EQ(a.exclusion, b.exclusion);
    EXPECT_EQ(a.word_count, b.word_count);
    EXPECT_EQ(a.planted, b.planted);
    EXPECT_EQ(a.llm_response, b.llm_response);
  }
}

TEST(Synthetic, EveryCatalogVariantAndExclusionPhraseAppears) {
  const auto corpus = synthetic::generate(synthetic::GeneratorSpec::mixed(200, 4));
  const auto& catalog = keywords::KeywordCatalog::default_catalog();
  for (const auto& v : catalog.variants()) {
    bool found = false;
    for (const auto& c : corpus.cases) found = found || testkit::naive_has(c.text, v);
    EXPECT_TRUE(found) << v;
  }
  for (const std::string p :
       {"application to amend the claim form", "application to amend a claim form", "application to amend the Defence",
        "an amendment to a claim form under CPR 17.3", "application for permission to amend",
        "application to serve outside the jurisdiction", "application for permission to serve outside the jurisdiction",
        "merits of the relevant claim under CPR r.6.37(1)(b)", "under CPR rr. 6.36, 6.37 and 6.38",
        "set aside a default judgment", "set aside or vary a judgment", "set aside a judgment entered in default",
        "CPR 13", "CPR 13.3"}) {
    bool found = false;
    for (const auto& c : corpus.cases) found = found || testkit::naive_has(c.text, p);
    EXPECT_TRUE(found) << p;
  }
}

TEST(Synthetic, FillerIsFreeOfSearchTerms) {
  const std::regex root(R"(\bsumm[a-z]*\s*judg[a-z]*)", std::regex::icase);
  const auto& catalog = keywords::KeywordCatalog::default_catalog();
  for (auto s : synthetic::filler_sentences()) {
    const std::string sentence(s);
    EXPECT_FALSE(std::regex_search(sentence, root)) << s;
    for (const auto& v : catalog.variants()) EXPECT_FALSE(testkit::naive_has(s, v)) << s << " / " << v;
    const auto d = testkit::naive_matrix(s);
    EXPECT_TRUE(d.inclusions.empty() && d.exclusions.empty()) << s;
  }
}

TEST(Synthetic, WordCountsHitTargets) {
  auto spec = synthetic::GeneratorSpec::mixed(30, 5);
  spec.long_cases = 1;
  const auto corpus = synthetic::generate(spec);
  for (std::size_t i = 0; i < corpus.cases.size(); ++i) {
    const auto& c = corpus.cases[i];
    EXPECT_EQ(c.word_count, corpus.truth[i].word_count);
    if (c.word_count > spec.max_words) {
      EXPECT_EQ(c.word_count, 239178u);
    } else {
      EXPECT_GE(c.word_count, spec.min_words);
    }
  }
  EXPECT_EQ(std::count_if(corpus.cases.begin(), corpus.cases.end(), [](const auto& c) { return c.word_count == 239178; }), 1);
}

TEST(Synthetic, UndatedAndPreCutoffCounts) {
  auto spec = synthetic::GeneratorSpec::mixed(100, 6);
  const auto corpus = synthetic::generate(spec);
  std::size_t undated = 0, early = 0;
  for (const auto& c : corpus.cases) {
    if (!c.hearing_date) {
      ++undated;
    } else if (static_cast<int>(c.hearing_date->year()) < spec.first_year) {
      ++early;
    }
  }
  EXPECT_EQ(undated, spec.undated);
  EXPECT_EQ(early, spec.pre_cutoff);
}

TEST(Synthetic, IdsUniqueAtFullCorpusScale) {
  // The id function alone decides uniqueness; check it over the full
  // 356,011-case range without generating text.
  std::set<std::string> ids;
  for (std::size_t i = 0; i < 356011; ++i) ids.insert(synthetic::case_id(i, 1999 + static_cast<int>(i % 25)));
  EXPECT_EQ(ids.size(), 356011u);
}

TEST(Synthetic, RejectsImpossibleSpecs) {
  synthetic::GeneratorSpec s;
  s.sj = 1;
  s.undated = 2;
  EXPECT_THROW(synthetic::generate(s), ArgumentError);
  s.undated = 0;
  s.min_words = 10;
  s.max_words = 5;
  EXPECT_THROW(synthetic::generate(s), ArgumentError);
}
