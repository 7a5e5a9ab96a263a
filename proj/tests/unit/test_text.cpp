// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <gtest/gtest.h>

#include <atomic>

#include "casesift/csv.hpp"
#include "casesift/errors.hpp"
#include "casesift/hashing.hpp"
#include "casesift/io.hpp"
#include "casesift/labels.hpp"
#include "casesift/parallel.hpp"
#include "casesift/rng.hpp"
#include "casesift/text.hpp"
#include "test_support.hpp"

using namespace casesift;

TEST(Text, CountWordsUsesMaximalNonSpaceRuns) {
  EXPECT_EQ(text::count_words(""), 0u);
  EXPECT_EQ(text::count_words("   \n\t "), 0u);
  EXPECT_EQ(text::count_words("one"), 1u);
  EXPECT_EQ(text::count_words("  one two\n\nthree\t"), 3u);
  EXPECT_EQ(text::count_words("r. 24.2 (ch)"), 3u);
}

TEST(Text, LowercasingIsAsciiOnly) {
  EXPECT_EQ(text::to_lower("Summary JUDGMENT"), "summary judgment");
  EXPECT_EQ(text::to_lower("\xC3\x89T\xC3\x89"), "\xC3\x89t\xC3\x89");
}

TEST(Text, OccurrencesCountOverlaps) {
  EXPECT_EQ(text::count_occurrences("aaaa", "aa"), 3u);
  EXPECT_EQ(text::count_occurrences("abc", ""), 0u);
  EXPECT_EQ(text::count_occurrences("ab", "abc"), 0u);
  EXPECT_EQ(text::find_all("xaxax", "xax"), (std::vector<std::size_t>{0, 2}));
}

TEST(Text, OccurrencesMatchNaiveCounterOnRandomStrings) {
  Rng rng(11);
  for (int round = 0; round < 500; ++round) {
    std::string h, n;
    const auto hl = rng.below(60), nl = 1 + rng.below(4);
    for (std::uint64_t i = 0; i < hl; ++i) h += static_cast<char>('a' + rng.below(3));
    for (std::uint64_t i = 0; i < nl; ++i) n += static_cast<char>('a' + rng.below(3));
    ASSERT_EQ(text::count_occurrences(h, n), testkit::naive_count(h, n)) << h << " / " << n;
  }
}

TEST(Text, CaseInsensitiveHelpers) {
  EXPECT_TRUE(text::istarts_with("Yes, this", "yes"));
  EXPECT_FALSE(text::istarts_with("Ye", "yes"));
  EXPECT_EQ(text::ifind("ab</CASE_TEXT>", "</case_text>"), 2u);
  EXPECT_EQ(text::ifind("abc", "d"), std::string_view::npos);
  EXPECT_EQ(text::trim("  x y \n"), "x y");
  EXPECT_EQ(text::split("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(text::join({"a", "b"}, ", "), "a, b");
}

TEST(Csv, RoundTripsAwkwardFields) {
  const std::vector<csv::Row> rows{{"plain", "with,comma", "with \"quote\""}, {"multi\nline", "", "x"}};
  testkit::TempDir dir;
  csv::write_file(dir / "t.csv", rows);
  EXPECT_EQ(csv::read_file(dir / "t.csv"), rows);
}

TEST(Csv, RejectsUnterminatedQuote) { EXPECT_THROW(csv::parse("a,\"b\n"), SchemaError); }

TEST(Csv, AcceptsCrLf) {
  EXPECT_EQ(csv::parse("a,b\r\nc,d\r\n"), (std::vector<csv::Row>{{"a", "b"}, {"c", "d"}}));
}

TEST(Hashing, KnownSha256) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Hashing, DirectoryHashTracksContentAndNames) {
  testkit::TempDir dir;
  io::write_file(dir / "a/x.txt", "1");
  io::write_file(dir / "b.txt", "2");
  const auto h1 = sha256_path(dir.path());
  EXPECT_EQ(h1, sha256_path(dir.path()));
  io::write_file(dir / "b.txt", "3");
  EXPECT_NE(h1, sha256_path(dir.path()));
}

TEST(Io, MissingFileIsIoError) { EXPECT_THROW(io::read_file("/nonexistent/casesift"), IoError); }

TEST(Labels, ParseAndPrint) {
  EXPECT_EQ(to_string(Label::sj), "SJ");
  EXPECT_EQ(to_string(Label::non_sj), "non-SJ");
  EXPECT_EQ(parse_label("SJ"), Label::sj);
  EXPECT_EQ(parse_label(" non-SJ "), Label::non_sj);
  EXPECT_EQ(parse_label("maybe"), std::nullopt);
}

TEST(Rng, BelowStaysInRangeAndIsDeterministic) {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    ASSERT_LT(x, 7u);
    ASSERT_EQ(x, b.below(7));
  }
}

TEST(Parallel, VisitsEveryIndexOnceAndRethrows) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, 4);
  for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
  EXPECT_THROW(parallel_for(
                   10, [](std::size_t i) { if (i == 3) throw ArgumentError("boom"); }, 3),
               ArgumentError);
}
