#pragma once

#include "rwdrive/model.hpp"
#include "rwdrive/types.hpp"

namespace rwd {

// Fixed quantities of the winch modules and the tension schedule.
struct ActuationConstants {
  double r_pulley = 0.0095;        // winding winch radius [m]
  double elongation_k = 0.000185;  // wire stretch per unit tension [m/N]
  double f_min = 10.0;             // keeps the wires from slacking [N]
  double f_max = 500.0;            // keeps the motors from overheating [N]
  double f_contract = 340.0;       // target total tension, holds the proximal VSC contracted [N]
  double agi_close_tension = 450.0;
  double distal_vsc_tension = 300.0;
  double torque_quantum = 5.0;     // discrete torque step [N*m]
  double init_tension = 5.0;       // weak tension held while capturing offsets [N]

  void validate() const;  // 0 < f_min < f_contract < 4*f_max, positive geometry
};

struct PidGains {
  JointVector kp{20.0, 20.0, 20.0};
  JointVector ki{2.0, 2.0, 2.0};
  JointVector kd{1.0, 1.0, 1.0};
  double integral_clamp = 10.0;  // bound on the integral torque contribution [N*m]

  void validate() const;
};

enum class ControlMode { Initialization, Expansion, JointControl };
enum class ModeCommand { InitDone, Expand, JointControl };

struct PidState {
  JointVector integral{JointVector::Zero()};  // accumulated ki contribution [N*m]
  JointVector prev_error{JointVector::Zero()};
  bool has_prev = false;
};

struct ControllerState {
  ControlMode mode = ControlMode::Initialization;
  Eigen::Vector4d motor_offset{Eigen::Vector4d::Zero()};
  bool offset_captured = false;
  PidState pid;
  JointVector q_hat{JointVector::Zero()};
  JointVector tau_ref{JointVector::Zero()};
  WireVector f_ref{WireVector::Zero()};
  Eigen::Vector4d t_ref{Eigen::Vector4d::Zero()};
};

// Stores the motor angles observed with the robot held at q = 0 under weak
// tension. Only legal in initialization mode; repeated captures overwrite.
void capture_offset(ControllerState& state, const Eigen::Vector4d& motor_angles);

// l_hat = r_pulley * theta - k * F, per wire. theta is offset-corrected.
WireVector estimate_wire_lengths(const Eigen::Vector4d& theta, const WireVector& tensions,
                                 const ActuationConstants& c);

// Subtracts the mean, cancelling the uniform take-up of the proximal VSC.
WireVector center_wire_lengths(const WireVector& l_hat);

// Estimation weight of a wire at tension F: slack wires carry no
// information, low tensions are half-trusted, elongation degrades trust as
// tension rises.
double wire_weight(double tension);

// Weighted least squares over the 3x3 normal equations.
JointVector estimate_joint_angles(const WireVector& l_tilde, const Eigen::Vector4d& weights,
                                  const TendonJacobian& G);

// PID on the angle error with a clamped integral term.
JointVector pid_torque(const JointVector& q_ref, const JointVector& q_hat, double dt,
                       const PidGains& gains, PidState& state);

// Rounds each component to the nearest multiple of quantum, half away from zero.
JointVector discretize_torque(const JointVector& tau, double quantum);

struct TensionSolution {
  WireVector tensions{WireVector::Zero()};
  JointVector torque_achieved{JointVector::Zero()};
  double tension_sum = 0.0;
  double sum_residual = 0.0;   // tension_sum - f_contract
  double torque_scale = 1.0;   // < 1 when the request was pulled back to the polytope boundary
  bool sum_clamped = false;    // the box prevented reaching f_contract
  bool torque_scaled = false;  // the request was outside the feasible torque polytope
};

// Minimizes (sum F - f_contract)^2 subject to tau = -G^T F and the tension
// box. The null space of G^T is spanned by the all-ones vector, so the
// feasible set is a segment and the minimizer is unique. Requests outside
// the polytope are scaled back radially to its boundary and flagged.
TensionSolution tensions_from_torque(const JointVector& tau_ref, const TendonJacobian& G,
                                     const ActuationConstants& c);

// T = r_pulley * F, per wire.
Eigen::Vector4d motor_torque_from_tension(const WireVector& f_ref, const ActuationConstants& c);

// Legal transitions: Initialization -> {Expansion, JointControl};
// Expansion <-> JointControl. Entering expansion zeroes the four coupled
// tensions; entering joint control arms a fresh PID state.
void step_mode(ControllerState& state, ModeCommand command);

enum class BinaryTarget { AgiEndEffector, DistalVsc };

// Discrete tension command for the two single-wire actuators.
double binary_actuator_command(BinaryTarget target, bool engage, const ActuationConstants& c);

}  // namespace rwd
