// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace casesift::io {

/// Reads a whole file; throws IoError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes a whole file, creating parent directories. Throws IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace casesift::io
