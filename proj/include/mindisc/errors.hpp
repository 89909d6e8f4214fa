// Copyright 2026 The mindisc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Exception types raised by the mindisc library.
 *
 * Every error derives from mindisc::Error so callers can catch the family
 * in one place; the CLI maps the concrete types onto distinct exit codes.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mindisc {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad argument or precondition (non-square input, epsilon out of range, ...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// Eigensolver non-convergence or non-finite arithmetic.
class NumericFailure : public Error {
  public:
    using Error::Error;
};

/// A value failed one of the validity checks on states or measurements.
class ValidationError : public Error {
  public:
    using Error::Error;
};

class NotHermitian : public ValidationError {
  public:
    NotHermitian(std::size_t index, double deviation)
        : ValidationError("element " + std::to_string(index) +
                          " is not Hermitian (max deviation " +
                          std::to_string(deviation) + ")"),
          index_(index), deviation_(deviation) {}

    [[nodiscard]] std::size_t index() const noexcept { return index_; }
    [[nodiscard]] double deviation() const noexcept { return deviation_; }

  private:
    std::size_t index_;
    double deviation_;
};

class NotPositive : public ValidationError {
  public:
    NotPositive(std::size_t index, double eigenvalue)
        : ValidationError("element " + std::to_string(index) +
                          " is not positive semidefinite (eigenvalue " +
                          std::to_string(eigenvalue) + ")"),
          index_(index), eigenvalue_(eigenvalue) {}

    [[nodiscard]] std::size_t index() const noexcept { return index_; }
    [[nodiscard]] double eigenvalue() const noexcept { return eigenvalue_; }

  private:
    std::size_t index_;
    double eigenvalue_;
};

class TraceNotOne : public ValidationError {
  public:
    explicit TraceNotOne(double trace)
        : ValidationError("density matrix trace is " + std::to_string(trace) +
                          ", expected 1"),
          trace_(trace) {}

    [[nodiscard]] double trace() const noexcept { return trace_; }

  private:
    double trace_;
};

class IncompleteSum : public ValidationError {
  public:
    explicit IncompleteSum(double deviation)
        : ValidationError("measurement elements do not sum to the identity "
                          "(max entry deviation " +
                          std::to_string(deviation) + ")"),
          deviation_(deviation) {}

    [[nodiscard]] double deviation() const noexcept { return deviation_; }

  private:
    double deviation_;
};

} // namespace mindisc
