#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace eklab {

/// Input outside an operation's domain (n below 2, non-squarefree d, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A user-facing parameter is invalid. `param()` names the offending
/// parameter (without leading dashes) so front ends can point at the flag.
class ParameterError : public std::invalid_argument {
 public:
  ParameterError(std::string param, const std::string& what)
      : std::invalid_argument(what), param_(std::move(param)) {}

  [[nodiscard]] const std::string& param() const noexcept { return param_; }

 private:
  std::string param_;
};

/// Requested work does not fit the memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An identity that must hold exactly was violated. Always a bug.
class AssertionFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace eklab
