// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "casesift/backend.hpp"
#include "casesift/corpus.hpp"

namespace casesift::llm {

/// Classification prompt: instructions, response contract and two worked
/// examples, followed by the case text between <case_text> tags.
struct PromptTemplate {
  std::string preamble;
  std::string criteria;
  std::string response_format;
  std::string exclusions;
  std::string examples;
  std::string slot_open = "<case_text>";
  std::string slot_close = "</case_text>";
  std::string suffix;

  static const PromptTemplate& standard();

  /// Case text is inserted once between slot_open and slot_close. Any closing
  /// tag already in the text is neutralized (see neutralize_closing_tags).
  std::string render(std::string_view case_text) const;
};

/// Inserts U+200B after "</" in every case-insensitive "</case_text>".
std::string neutralize_closing_tags(std::string_view text);

enum class Outcome { sj, non_sj, skipped, unparseable };

std::string_view to_string(Outcome o) noexcept;
std::optional<Outcome> parse_outcome(std::string_view s);

struct ParsedResponse {
  Outcome label = Outcome::unparseable;
  std::string reason;
};

/// Reads the first <response>...</response> span. "Yes, this is a summary
/// judgment case" (any case) with a nonempty "Reason:" is SJ; "No, this is
/// not" is non-SJ; everything else is unparseable.
ParsedResponse parse_response(std::string_view raw);

enum class GuardVerdict { pass, skip };

/// Skip iff word_count > limit_words (the limit itself passes).
GuardVerdict length_guard(const corpus::Case& c, std::uint64_t limit_words);

struct LengthGuard {
  std::uint64_t limit_words = 70000;
  /// When both are set, also skip if (case words + prompt words) * ratio
  /// exceeds the token limit.
  std::optional<double> tokens_per_word;
  std::optional<std::uint64_t> token_limit;

  GuardVerdict check(const corpus::Case& c, std::uint64_t prompt_words) const;
};

struct LlmDecision {
  std::string case_id;
  Outcome label = Outcome::unparseable;
  std::string reason;
  std::string raw_response;
  std::string backend_id;
  std::string note;

  bool operator==(const LlmDecision&) const = default;
};

nlohmann::json to_json(const LlmDecision& d);
LlmDecision decision_from_json(const nlohmann::json& j);

/// Last entry per case id wins.
std::vector<LlmDecision> read_decision_log(const std::filesystem::path& path);

struct ClassifyOptions {
  const PromptTemplate* prompt = nullptr;  ///< defaults to PromptTemplate::standard()
  LengthGuard guard;
  std::size_t max_concurrent_requests = 4;
  std::size_t max_output_tokens = 300;
  RetryPolicy retry;
  /// Decisions are appended here as they complete; existing entries are
  /// reused on the next run instead of re-querying.
  std::filesystem::path decision_log;
  /// Requesting a stop lets in-flight requests finish and then returns.
  std::stop_token stop;
};

struct LlmResult {
  corpus::Dataset sj;       ///< CSJD
  corpus::Dataset non_sj;   ///< CNSJD
  std::vector<std::string> skipped;
  std::vector<std::string> unparseable;
  std::vector<LlmDecision> decisions;  ///< id order, completed cases only
  std::size_t resumed = 0;  ///< decisions taken from an existing log
  std::size_t queried = 0;  ///< cases sent to the backend in this run
  bool interrupted = false;
};

LlmResult classify_dataset(const corpus::Dataset& dataset, CompletionBackend& backend,
                           const ClassifyOptions& options = {});

}  // namespace casesift::llm
