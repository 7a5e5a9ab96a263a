// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace casesift::corpus {

using Date = std::chrono::year_month_day;

/// One court decision.
struct Case {
  std::string id;
  std::string court;
  std::optional<Date> hearing_date;
  std::string text;
  std::uint64_t word_count = 0;

  bool operator==(const Case&) const = default;
};

/// Builds a Case, computing word_count from text.
Case make_case(std::string id, std::string court, std::optional<Date> hearing_date, std::string text);

/// Accepts ISO-8601 ("2017-02-17") and "D Month YYYY" ("17 February 2017").
/// Anything else, including impossible calendar dates, yields nullopt.
std::optional<Date> parse_date(std::string_view s);

/// ISO-8601 rendering.
std::string format_date(const Date& d);

/// An immutable, id-sorted collection of cases with unique ids.
class Dataset {
 public:
  Dataset() = default;

  /// Sorts by id. Throws SchemaError on a duplicate id.
  Dataset(std::string name, std::string provenance, std::vector<Case> cases);

  const std::string& name() const noexcept { return name_; }
  const std::string& provenance() const noexcept { return provenance_; }
  std::span<const Case> cases() const noexcept { return cases_; }
  std::size_t size() const noexcept { return cases_.size(); }
  bool empty() const noexcept { return cases_.empty(); }
  auto begin() const noexcept { return cases_.begin(); }
  auto end() const noexcept { return cases_.end(); }
  const Case& operator[](std::size_t i) const { return cases_[i]; }

  /// Binary search by id.
  const Case* find(std::string_view id) const noexcept;

  std::vector<std::string> ids() const;

  Dataset renamed(std::string name, std::string provenance) const;

 private:
  std::string name_;
  std::string provenance_;
  std::vector<Case> cases_;
};

// ---------------------------------------------------------------------------
// Case XML
//
//   <case>
//     <court>England and Wales High Court (Chancery Division)</court>
//     <hearing_date>2017-02-17</hearing_date>          (optional)
//     <citation>[2017] EWHC 283 (Ch)</citation>
//     <text>...</text>
//   </case>
//
// The citation is the case id; when it is absent the caller-supplied fallback
// id (normally the file stem) is used.
// ---------------------------------------------------------------------------

/// Throws ParseError (with byte offset) on malformed XML and SchemaError when
/// <text> is missing, the hearing date is invalid or no id can be determined.
Case parse_case_document(std::string_view xml, std::string_view fallback_id = {});

std::string serialize_case_document(const Case& c);

// JSON Lines persistence: one object per line with id, court, hearing_date
// (ISO string or null), text and word_count.

nlohmann::json to_json(const Case& c);
Case case_from_json(const nlohmann::json& j);

void write_jsonl(const std::filesystem::path& path, const Dataset& dataset);
Dataset read_jsonl(const std::filesystem::path& path);

struct SkippedFile {
  std::string filename;
  std::string error;
};

struct LoadResult {
  Dataset dataset;
  std::vector<SkippedFile> skipped;
};

/// Loads a directory of .xml case files (recursively), a single .xml file or a
/// .jsonl dataset. Unparseable files and duplicate ids are skipped and listed;
/// a missing or unreadable path throws IoError.
LoadResult load_corpus(const std::filesystem::path& path, std::size_t threads = 0);

/// CSV `filename,error`.
void write_skip_manifest(const std::filesystem::path& path, std::span<const SkippedFile> skipped);

struct DateFilterResult {
  Dataset kept;                        ///< dated on/after the cutoff, plus undated cases
  Dataset excluded;                    ///< dated before the cutoff
  std::vector<std::string> undated;    ///< ids retained without a hearing date
};

DateFilterResult filter_by_date(const Dataset& dataset, const Date& cutoff);

}  // namespace casesift::corpus
