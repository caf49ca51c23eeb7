#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace widzard {

/// Malformed input text. Always carries the 1-based line the parser rejected.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string &what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A structurally well-formed input that violates a semantic side condition
/// (ITD active-label rules, width bounds, decomposition properties).
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Unknown core name or wrong parameter arity.
class CoreError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numeric domain failure while evaluating a formula (sqrt(-1), ln(0), ...).
class FormulaDomainError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace widzard
