// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace casesift {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's contents, or of every regular file below a directory
/// (relative path and contents, in sorted path order).
std::string sha256_path(const std::filesystem::path& path);

}  // namespace casesift
