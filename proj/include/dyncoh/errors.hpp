#ifndef DYNCOH_ERRORS_HPP
#define DYNCOH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dyncoh {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed mathematical object or input file: non-Hermitian density matrix,
// Kraus set that is not trace preserving, unreadable channel file, ...
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Operands whose dimensions cannot be combined (composition, tensor factors,
// partial trace over a non-product shape, ...).
class DimensionError : public ValidationError {
 public:
  explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

// An iterative routine (state optimizer, interior-point solver) stopped
// without reaching its tolerance.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(what) {}
};

}  // namespace dyncoh

#endif  // DYNCOH_ERRORS_HPP
