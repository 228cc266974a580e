#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netref {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: wrong dimensions, out-of-range indices, invalid partitions.
// Carries every issue found, not only the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message)
      : Error(message), issues_{std::move(message)} {}
  explicit ValidationError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

// The instance leaves the interior regime in which the closed forms hold
// (singular or indefinite system, alpha_i <= c, non-concave leader problem).
class AssumptionError : public Error {
 public:
  using Error::Error;
};

// An iterative procedure in the oracle ran out of iterations or evaluations.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace netref
