#pragma once

#include <stdexcept>
#include <string>

namespace tfuncert {

// Raised when an argument falls outside the domain an operation is defined
// on (bad exponents, undersized grids, aliasing guards). The CLI maps it to
// exit status 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a numerical routine fails to produce a result (factorization
// breakdown, eigensolver non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tfuncert
