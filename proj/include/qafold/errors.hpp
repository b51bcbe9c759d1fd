#pragma once

#include <stdexcept>
#include <string>

namespace qafold {

enum class ErrorKind {
  validation,  // malformed input, unknown index, bad schedule
  encoding,    // turn string of the wrong shape
  geometry,    // fold with a non-unit step
  capacity,    // problem too large for an exhaustive / dense path
  plan,        // quadratization plan leaves a monomial of degree >= 3
  penalty,     // explicit penalty fails the violation criterion
  embedding,   // minor embedding could not be completed
  stage,       // pipeline stage failure
};

/// Exception type used across the library. The CLI maps kind() onto its exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// 0 success, 2 validation, 3 capacity, 4 stage failure.
int exit_code(ErrorKind kind) noexcept;

}  // namespace qafold
