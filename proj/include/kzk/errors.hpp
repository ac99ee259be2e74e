#pragma once

#include <stdexcept>
#include <string>

namespace kzk {

/// Adaptive integration could not reach the end of its interval.
class IntegrationFailure : public std::runtime_error {
 public:
  IntegrationFailure(const std::string& what, double t_reached, double step)
      : std::runtime_error(what), t_reached_(t_reached), step_(step) {}
  double t_reached() const { return t_reached_; }
  double last_step() const { return step_; }

 private:
  double t_reached_;
  double step_;
};

/// A quadrature could not certify the requested accuracy.
class AccuracyFailure : public std::runtime_error {
 public:
  AccuracyFailure(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

class FitFailure : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation requested at a point where the quantity is undefined
/// (gap closing, pole of the pair amplitude).
class SingularPoint : public std::domain_error {
  using std::domain_error::domain_error;
};

class ResourceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A physical invariant of a computed object does not hold.
class InvariantViolation : public std::runtime_error {
 public:
  InvariantViolation(std::string name, const std::string& detail)
      : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace kzk
