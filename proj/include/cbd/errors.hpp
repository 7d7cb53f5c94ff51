#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cbd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problems with what the caller handed us: malformed files, invalid
// distributions, systems outside what the engines support.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

 private:
  std::vector<std::string> violations_;
};

class UnsupportedError : public InputError {
 public:
  using InputError::InputError;
};

// The LP backend failed to reach a verdict (iteration limit, singular basis,
// witness that does not validate). Distinct from "infeasible".
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbd
