#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qmono {

/// Raised by the circuit DSL parser. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A circuit that is structurally valid but violates the tree-like requirement.
class NotTreeLikeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The exact expansion would exceed the configured term cap.
class OracleLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace qmono
