// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <regex>
#include <string>
#include <string_view>

#include "casesift/corpus.hpp"

namespace casesift::regex {

/// Root pattern for summary-judgment wording. `\s*` admits zero whitespace,
/// so "summjudg" also matches.
inline constexpr std::string_view kDefaultRootPattern = R"(\bsumm[a-z]*\s*judg[a-z]*)";

/// A compiled root pattern (ECMAScript syntax).
class RootPattern {
 public:
  /// Throws ConfigError if the source does not compile.
  explicit RootPattern(std::string source = std::string(kDefaultRootPattern),
                       bool case_insensitive = true);

  const std::string& source() const noexcept { return source_; }
  bool case_insensitive() const noexcept { return case_insensitive_; }
  const std::regex& compiled() const noexcept { return regex_; }

 private:
  std::string source_;
  bool case_insensitive_;
  std::regex regex_;
};

/// True iff the pattern matches anywhere in text. Case-insensitive patterns
/// match against the ASCII-lowercased text, so `[a-z]` covers uppercase too.
bool matches_root(std::string_view text, const RootPattern& pattern);

/// Cases whose text matches; provenance "regex-sj".
corpus::Dataset regex_filter(const corpus::Dataset& dataset, const RootPattern& pattern,
                             std::size_t threads = 0);

}  // namespace casesift::regex
