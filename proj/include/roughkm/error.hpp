#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace roughkm {

// Process exit codes used by the command line tool.
enum class ExitCode : int {
  ok = 0,
  config = 2,
  input = 3,
  stage = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::stage; }
};

// Malformed delimited text. Line and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  ExitCode exit_code() const noexcept override { return ExitCode::input; }

 private:
  static std::string format(const std::string& what, std::size_t line, std::size_t column) {
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
  }

  std::size_t line_;
  std::size_t column_;
};

// Structurally parseable input that violates a data invariant (duplicate labels, bad shape).
class ValidationError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::input; }
};

// Unreadable input or an input-stage failure.
class InputError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::input; }
};

// Unknown identifier (attribute, gene, cluster).
class LookupError : public Error {
 public:
  using Error::Error;
};

// Operation produced nothing the pipeline can continue with.
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::config; }
};

// Wraps a failure raised inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace roughkm
