#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace rwd {

// Joint-space quantity: angles [rad], rates [rad/s] or torques [N*m].
using JointVector = Eigen::Vector3d;
// Per-wire quantity over the four coupled wires: lengths [m] or tensions [N].
using WireVector = Eigen::Vector4d;

// GCD-Joint range of motion (|q_i| <= limit).
inline constexpr double kJointLimitRad = 2.27;
// VSC-Link length range [m].
inline constexpr double kVscMinLength = 0.185;
inline constexpr double kVscMaxLength = 0.302;
// Range of motion of a single decoupled joint [rad].
inline const double kDecoupledBendLimit = 3.0 * M_PI / 4.0;

// Stateful API used in the wrong mode or an illegal transition requested.
class StateError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// Weighted least-squares system could not be solved.
class EstimationError : public std::runtime_error {
public:
  EstimationError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

private:
  double condition_;
};

// Correlation undefined (constant series or empty overlap).
class CorrelationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Config-file problem, annotated with the source line.
class ConfigError : public std::runtime_error {
public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

// Log file does not match the expected schema.
class LogSchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace rwd
