// SPDX-License-Identifier: MIT
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace capdisc {

/// A point failed the unit-norm check at load time. Carries the offending
/// zero-based point indices for diagnostics.
class UnitNormError : public std::runtime_error {
 public:
  UnitNormError(std::string message, std::vector<int> offenders)
      : std::runtime_error(std::move(message)), offenders_(std::move(offenders)) {}

  const std::vector<int>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<int> offenders_;
};

/// Malformed point file; line is 1-based.
class PointFileError : public std::runtime_error {
 public:
  PointFileError(std::string message, int line)
      : std::runtime_error(std::move(message)), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A subset passed the rank pre-check but its factorization or kernel
/// extraction still failed numerically. Callers skip the subset and count it.
class DegenerateSubsetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace capdisc
