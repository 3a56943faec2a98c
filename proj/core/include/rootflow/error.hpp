#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rootflow {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad polynomial, mismatched degrees, violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by the zero series") {}
};

/// Raised when truncation leaves a series whose magnitude class can no longer
/// be determined.
class OrderExhausted : public Error {
 public:
  using Error::Error;
};

/// Standard part requested for an infinite value.
class InfiniteValue : public Error {
 public:
  using Error::Error;
};

class NotSimpleRoot : public Error {
 public:
  using Error::Error;
};

/// Iterative numeric method gave up. Carries the last iterate.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what,
                 std::vector<std::complex<double>> best_iterate)
      : Error(what), best_iterate_(std::move(best_iterate)) {}

  const std::vector<std::complex<double>>& best_iterate() const noexcept {
    return best_iterate_;
  }

 private:
  std::vector<std::complex<double>> best_iterate_;
};

/// A numerically singular linear system (e.g. coincident interpolation nodes).
class SingularSystem : public Error {
 public:
  using Error::Error;
};

}  // namespace rootflow
