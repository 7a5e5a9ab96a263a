// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#include "sectioned.hpp"

#include "casesift/errors.hpp"
#include "casesift/text.hpp"

namespace casesift::detail {

std::vector<Section> parse_sections(std::string_view input, const std::string& source) {
  std::vector<Section> sections;
  int line_no = 0;
  for (const auto& raw : text::split(input, '\n')) {
    ++line_no;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      auto name = text::trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("empty section name", source, line_no, 1);
      sections.push_back({std::string(name), line_no, {}});
      continue;
    }
    if (sections.empty()) throw ConfigError("entry before any [section] header", source, line_no, 1);
    sections.back().entries.push_back({std::string(line), line_no});
  }
  return sections;
}

}  // namespace casesift::detail
