#ifndef BGROUND_ERRORS_HPP
#define BGROUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bground {

/// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails to reach its stopping criterion.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) {
    throw ValidationError(message);
  }
}

}  // namespace detail
}  // namespace bground

#endif  // BGROUND_ERRORS_HPP
