// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include <benchmark/benchmark.h>

#include "casesift/analytics.hpp"
#include "casesift/keywords.hpp"
#include "casesift/matrix.hpp"
#include "casesift/regex.hpp"
#include "casesift/rng.hpp"
#include "casesift/sampling.hpp"
#include "casesift/synthetic.hpp"

using namespace casesift;

namespace {

const synthetic::SyntheticCorpus& corpus_fixture() {
  static const auto gen = synthetic::generate(synthetic::GeneratorSpec::mixed(200, 11));
  return gen;
}

std::int64_t total_bytes(const synthetic::SyntheticCorpus& gen) {
  std::int64_t n = 0;
  for (const auto& c : gen.cases) n += static_cast<std::int64_t>(c.text.size());
  return n;
}

void BM_RegexRoot(benchmark::State& state) {
  const auto& gen = corpus_fixture();
  const regex::RootPattern pattern;
  for (auto _ : state) {
    std::size_t hits = 0;
    for (const auto& c : gen.cases) hits += regex::matches_root(c.text, pattern);
    benchmark::DoNotOptimize(hits);
  }
  state.SetBytesProcessed(state.iterations() * total_bytes(gen));
}
BENCHMARK(BM_RegexRoot)->Unit(benchmark::kMillisecond);

void BM_KeywordScan(benchmark::State& state) {
  const auto& gen = corpus_fixture();
  const auto& catalog = keywords::KeywordCatalog::default_catalog();
  for (auto _ : state) {
    for (const auto& c : gen.cases) benchmark::DoNotOptimize(keywords::scan_text(c.id, c.text, catalog));
  }
  state.SetBytesProcessed(state.iterations() * total_bytes(gen));
}
BENCHMARK(BM_KeywordScan)->Unit(benchmark::kMillisecond);

void BM_MatrixRules(benchmark::State& state) {
  const auto& gen = corpus_fixture();
  const auto& rules = matrix::RuleSet::default_ruleset();
  for (auto _ : state) {
    for (const auto& c : gen.cases) benchmark::DoNotOptimize(matrix::evaluate(c.id, c.text, rules));
  }
  state.SetBytesProcessed(state.iterations() * total_bytes(gen));
}
BENCHMARK(BM_MatrixRules)->Unit(benchmark::kMillisecond);

void BM_KMeans1D(benchmark::State& state) {
  Rng rng(5);
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (auto& v : values) v = static_cast<double>(rng.below(240000));
  for (auto _ : state) benchmark::DoNotOptimize(analytics::kmeans_1d(values, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KMeans1D)->Arg(1000)->Arg(10000);

void BM_SampleSize(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sampling::required_sample_size(3545, 0.95, 0.05, 0.5));
}
BENCHMARK(BM_SampleSize);

}  // namespace

BENCHMARK_MAIN();
