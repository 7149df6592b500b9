#pragma once

#include <stdexcept>
#include <string>

namespace flame {

/// Velocity class too close to the dressing-field pole.
class singular_velocity_error : public std::domain_error {
 public:
  singular_velocity_error(double velocity, const std::string& what)
      : std::domain_error(what), velocity_(velocity) {}
  double velocity() const { return velocity_; }

 private:
  double velocity_;
};

/// Pulse parameters that cannot be realized (e.g. FWHM shorter than the edges).
class infeasible_pulse_error : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Scenario/config value violating a type invariant; names the field.
class validation_error : public std::invalid_argument {
 public:
  validation_error(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Numerical failure inside the propagation (NaN, step instability).
class solver_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace flame
