#ifndef UCRISK_ERROR_HPP
#define UCRISK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ucrisk {

/// Absolute tolerance used for equality tests on expectations and capacities.
inline constexpr double kDefaultTol = 1e-12;

/// Mass tolerance for "is a probability measure".
inline constexpr double kProbabilityTol = 1e-9;

/// Two objects were defined on different outcome spaces.
class SpaceMismatch : public std::domain_error {
public:
  explicit SpaceMismatch(const std::string& what)
      : std::domain_error("space mismatch: " + what) {}
};

/// A measure charges an outcome that no scenario charges, so it is not
/// dominated by the capacity.
class NotInDualCone : public std::domain_error {
public:
  NotInDualCone(const std::string& which, std::string outcome)
      : std::domain_error("not in dual cone: " + which + " charges outcome '" + outcome +
                          "' which no scenario charges"),
        outcome_(std::move(outcome)) {}

  const std::string& outcome() const noexcept { return outcome_; }

private:
  std::string outcome_;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed input files, bad expressions, unevaluable payoffs.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ucrisk

#endif  // UCRISK_ERROR_HPP
