// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "casesift/regex.hpp"

#include "casesift/errors.hpp"
#include "casesift/parallel.hpp"
#include "casesift/text.hpp"

namespace casesift::regex {

namespace {

std::regex compile(const std::string& source, bool icase) {
  auto flags = std::regex::ECMAScript | std::regex::optimize;
  if (icase) flags |= std::regex::icase;
  try {
    return std::regex(source, flags);
  } catch (const std::regex_error& e) {
    throw ConfigError("invalid root pattern '" + source + "': " + e.what());
  }
}

}  // namespace

RootPattern::RootPattern(std::string source, bool case_insensitive)
    : source_(std::move(source)), case_insensitive_(case_insensitive), regex_(compile(source_, case_insensitive_)) {}

bool matches_root(std::string_view text, const RootPattern& pattern) {
  if (pattern.case_insensitive()) {
    const auto lowered = text::to_lower(text);
    return std::regex_search(lowered, pattern.compiled());
  }
  return std::regex_search(text.begin(), text.end(), pattern.compiled());
}

corpus::Dataset regex_filter(const corpus::Dataset& dataset, const RootPattern& pattern, std::size_t threads) {
  std::vector<char> hit(dataset.size(), 0);
  parallel_for(
      dataset.size(), [&](std::size_t i) { hit[i] = matches_root(dataset[i].text, pattern) ? 1 : 0; }, threads);
  std::vector<corpus::Case> kept;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (hit[i]) kept.push_back(dataset[i]);
  }
  return corpus::Dataset("regex_sj", "regex-sj", std::move(kept));
}

}  // namespace casesift::regex
