#pragma once

#include <stdexcept>
#include <string>

namespace ocwc {

// Caller violated an API contract (width mismatch, mixed backends,
// non-power-of-two network size, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed or out-of-domain input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : DataError("line " + std::to_string(row) + ", column " +
                  std::to_string(column) + ": " + what),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

// Failure inside a bit backend: missing keys, adapter not loadable,
// native library error, resource budget exhausted.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation needed more backend slots than its configured budget.
class BudgetExceeded : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace ocwc
