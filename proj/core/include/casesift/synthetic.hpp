// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "casesift/corpus.hpp"
#include "casesift/labels.hpp"

namespace casesift::synthetic {

/// What a generated case is built to exercise.
///
///   sj          genuine SJ; fires one inclusion rule (cycling 1..7), no exclusion
///   sj_sparse   genuine SJ that only says "summary judgment"; the matrix misses it
///   mention     non-SJ that mentions summary judgment without firing any rule
///   reference   non-SJ that cites an earlier SJ with CPR 24 wording; the matrix fires
///   distractor  non-SJ that fires an inclusion rule and an exclusion (8a/8b/8c cycling)
///   unrelated   non-SJ with no summary-judgment wording at all
enum class CaseKind { sj, sj_sparse, mention, reference, distractor, unrelated };

std::string_view to_string(CaseKind k) noexcept;

struct GeneratorSpec {
  std::uint64_t seed = 1;
  std::size_t sj = 0;
  std::size_t sj_sparse = 0;
  std::size_t mention = 0;
  std::size_t reference = 0;
  std::size_t distractor = 0;
  std::size_t unrelated = 0;
  /// Extra cases of kind sj whose text is padded to exactly long_case_words.
  std::size_t long_cases = 0;
  std::uint64_t long_case_words = 239178;
  /// Dated cases are spread over [first_year, last_year]; these counts are
  /// carved out of the kinds above.
  std::size_t undated = 0;
  std::size_t pre_cutoff = 0;
  int first_year = 1999;
  int last_year = 2023;
  std::uint64_t min_words = 150;
  std::uint64_t max_words = 2500;

  std::size_t total() const noexcept {
    return sj + sj_sparse + mention + reference + distractor + unrelated + long_cases;
  }

  /// Default mix over n cases (roughly the shape of a regex-filtered corpus).
  static GeneratorSpec mixed(std::size_t n, std::uint64_t seed);

  /// Exactly n_sj genuine-SJ and n_non_sj non-SJ cases, spread across kinds.
  static GeneratorSpec with_labels(std::size_t n_sj, std::size_t n_non_sj, std::uint64_t seed);
};

/// Ground truth for one generated case.
struct Truth {
  std::string case_id;
  CaseKind kind = CaseKind::unrelated;
  Label label = Label::non_sj;         ///< what a careful reviewer would say
  bool regex_match = false;            ///< expected stage-1 outcome
  Label matrix_label = Label::non_sj;  ///< expected search-matrix outcome
  std::string rule;                    ///< inclusion rule planted ("" if none)
  std::string exclusion;               ///< exclusion planted ("" if none)
  std::uint64_t word_count = 0;
  std::map<std::string, std::uint64_t> planted;  ///< phrase -> times planted (as written, before case mangling)
  std::string llm_response;            ///< scripted backend answer
};

struct SyntheticCorpus {
  std::vector<corpus::Case> cases;
  std::vector<Truth> truth;  ///< parallel to cases
};

/// Deterministic in spec (including seed).
SyntheticCorpus generate(const GeneratorSpec& spec);

/// Neutral citation used as the id of the index-th generated case.
std::string case_id(std::size_t index, int year);

/// Writes cases/<stem>.xml, answers.csv, plants.csv and llm_script.csv.
void write(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

/// Reads answers.csv + plants.csv back.
std::vector<Truth> read_truth(const std::filesystem::path& dir);

/// Filler sentences used to pad generated text. None contains a catalog
/// keyword, a rule phrase or a root-pattern match.
const std::vector<std::string_view>& filler_sentences();

}  // namespace casesift::synthetic
