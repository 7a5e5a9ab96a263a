// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace casesift::csv {

using Row = std::vector<std::string>;

/// RFC 4180 field quoting: fields containing comma, quote, CR or LF are quoted.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const Row& row);

/// Parses RFC 4180 text. Quoted fields may span lines.
std::vector<Row> parse(std::string_view text);

std::vector<Row> read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, const std::vector<Row>& rows);

}  // namespace casesift::csv
