#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tqec {

/// Bad argument or out-of-range parameter supplied by the caller.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A precondition between related arguments was broken (e.g. scoring an
/// unflagged node, overlapping correction/abstention sets).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fano factor requested for a series whose mean is zero.
class MeanZeroError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A statistic needs non-zero variance and did not get it.
class DegenerateVarianceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tqec
