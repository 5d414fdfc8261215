#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace nct {

/// Input was well-formed but violates a mathematical precondition
/// (non-skew matrix, singular transform, degenerate theta where the
/// classification theorems need nondegeneracy, mismatched bases, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Skew-symmetry violation, 0-based indices of the first offending entry.
class SkewError : public ValidationError {
 public:
  SkewError(std::size_t row, std::size_t col, const std::string& what)
      : ValidationError(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

/// A product of two symbolic basis elements was requested but the basis
/// declares no label for it.
class NotRepresentable : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Malformed input document. `field` is a JSON-pointer-like path.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A bounded search ran out of budget without a certified answer.
class SearchExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A postcondition that the underlying mathematics guarantees did not hold.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nct
