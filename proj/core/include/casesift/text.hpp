// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace casesift::text {

constexpr bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

constexpr char to_lower(char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

/// ASCII lowercase. Non-ASCII bytes pass through, so byte offsets are preserved.
std::string to_lower(std::string_view s);

bool is_lower(std::string_view s) noexcept;

std::string_view trim(std::string_view s) noexcept;

/// Number of maximal runs of non-whitespace characters.
std::uint64_t count_words(std::string_view s) noexcept;

/// Occurrences of `needle` in `haystack`, counted at every start offset
/// (the search advances by one byte after each hit).
std::uint64_t count_occurrences(std::string_view haystack, std::string_view needle) noexcept;

/// Start offsets of every occurrence, same advance rule as count_occurrences.
std::vector<std::size_t> find_all(std::string_view haystack, std::string_view needle);

bool contains(std::string_view haystack, std::string_view needle) noexcept;

bool istarts_with(std::string_view s, std::string_view prefix) noexcept;

/// Case-insensitive find; returns npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0) noexcept;

std::vector<std::string> split(std::string_view s, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace casesift::text
