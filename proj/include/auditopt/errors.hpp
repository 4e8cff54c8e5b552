#pragma once

#include <stdexcept>
#include <string>

namespace auditopt {

/// Input outside the mathematical domain of a formula (negative effort, x = 0 for the liability loss).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters fall outside the return-on-security-investment band an operation is defined for.
class RegimeError : public std::runtime_error {
 public:
  RegimeError(const std::string& rosi_case, const std::string& what)
      : std::runtime_error(what + " (ROSI case " + rosi_case + ")"), rosi_case_(rosi_case) {}

  const std::string& rosi_case() const noexcept { return rosi_case_; }

 private:
  std::string rosi_case_;
};

/// A caller-side precondition does not hold (index out of range, truncation residual too large).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace auditopt
