// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "casesift/corpus.hpp"
#include "casesift/labels.hpp"

namespace casesift::matrix {

/// Boolean expression over lowercase phrase literals.
struct Expr {
  enum class Kind { phrase, all_of, any_of };
  Kind kind = Kind::phrase;
  std::string phrase;           // Kind::phrase
  std::vector<Expr> children;   // all_of / any_of

  static Expr literal(std::string phrase);
  static Expr all(std::vector<Expr> children);
  static Expr any(std::vector<Expr> children);

  /// Canonical text form, e.g. `("a" OR "b") AND "c"`.
  std::string to_string() const;
  bool operator==(const Expr&) const = default;
};

struct Rule {
  std::string id;
  Expr expr;
};

/// Inclusion and exclusion rules. A case is SJ when at least one inclusion
/// fires and no exclusion fires.
class RuleSet {
 public:
  RuleSet(std::vector<Rule> inclusions, std::vector<Rule> exclusions);

  /// Parses the rule config language (see search_matrix.cfg). Throws ConfigError
  /// with line and column on any syntax or reference error.
  static RuleSet from_config_text(std::string_view text, const std::string& source = "<rules>");
  static RuleSet load(const std::filesystem::path& path);
  /// The shipped search_matrix.cfg.
  static const RuleSet& default_ruleset();

  std::span<const Rule> inclusions() const noexcept { return inclusions_; }
  std::span<const Rule> exclusions() const noexcept { return exclusions_; }
  /// Distinct leaf phrases in first-seen order.
  std::span<const std::string> phrases() const noexcept { return phrases_; }

 private:
  std::vector<Rule> inclusions_;
  std::vector<Rule> exclusions_;
  std::vector<std::string> phrases_;
};

struct MatrixDecision {
  std::string case_id;
  Label label = Label::non_sj;
  std::vector<std::string> fired_inclusions;
  std::vector<std::string> fired_exclusions;
};

/// Pure function of (text, rules); phrases match as lowercase substrings.
MatrixDecision evaluate(std::string_view case_id, std::string_view text, const RuleSet& rules);

struct MatrixResult {
  corpus::Dataset sj;       ///< KSJD
  corpus::Dataset non_sj;   ///< KNSJD
  std::vector<MatrixDecision> decisions;  ///< id order
};

MatrixResult classify_dataset(const corpus::Dataset& dataset, const RuleSet& rules, std::size_t threads = 0);

/// CSV `case_id,label,fired_inclusions,fired_exclusions`; rule ids joined by ';'.
void write_decisions_csv(const std::filesystem::path& path, std::span<const MatrixDecision> decisions);
std::vector<MatrixDecision> read_decisions_csv(const std::filesystem::path& path);

}  // namespace casesift::matrix
