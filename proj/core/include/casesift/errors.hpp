// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The casesift Authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace casesift {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. Carries the byte offset reported by the parser.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t byte_offset)
      : Error(message + " (at byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// Well-formed input missing a required field or carrying an invalid value.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration file. The message is prefixed with `source:line:col`.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, const std::string& source, int line, int column)
      : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  explicit ConfigError(const std::string& message) : Error(message) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_ = 0;
  int column_ = 0;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Transport-level failure talking to a completion backend.
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace casesift
