// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace casesift::detail {

struct SectionEntry {
  std::string text;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<SectionEntry> entries;
};

/// Parses `[section]` headers followed by one entry per line. Blank lines and
/// lines starting with '#' are ignored; entries are whitespace-trimmed.
/// Entries before the first header raise ConfigError.
std::vector<Section> parse_sections(std::string_view text, const std::string& source);

}  // namespace casesift::detail
