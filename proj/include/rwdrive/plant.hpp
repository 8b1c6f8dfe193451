#pragma once

#include "rwdrive/controller.hpp"
#include "rwdrive/model.hpp"
#include "rwdrive/types.hpp"

namespace rwd {

// Spring-extended, wire-contracted link that locks rigid at full contraction.
struct VscLink {
  double length = kVscMaxLength;
  bool locked = false;
};

enum class AgiPhase { FullyOpenLocked, Partial, Closed };

// Anchor-gripper end effector. angle is the finger closing angle:
// 0 = fully open (lockable as an anchor), closed_angle = fully closed.
struct AgiState {
  AgiPhase phase = AgiPhase::Closed;
  double angle = M_PI / 2.0;
};

struct PlantParams {
  JointVector damping{2.0, 2.0, 2.0};   // N*m*s/rad
  JointVector inertia{0.0, 0.0, 0.0};   // kg*m^2; zero selects the first-order model
  double joint_limit = kJointLimitRad;

  double vsc_min = kVscMinLength;       // m
  double vsc_max = kVscMaxLength;       // m
  double vsc_spring_max = 244.0;        // N, spring extension force
  double vsc_speed = 0.04;              // m/s stroke rate limit

  double agi_spring_max = 149.0;        // N, opening spring
  double agi_close_threshold = 300.0;   // N, tension needed to break the open lock
  double agi_torque_min = -2.0;         // N*m finger torque bounds
  double agi_torque_max = 4.0;
  double agi_moment_arm = 0.0133;       // m, tension/spring force to finger torque
  double agi_damping = 2.0;             // N*m*s/rad
  double agi_closed_angle = M_PI / 2.0; // rad

  double slip = 0.0;  // fraction of anchored stroke lost to anchor slippage

  void validate() const;
};

// Simulated distal robot on a 1-D track. body_displacement tracks the
// shoulder point, ee_displacement the AGI-EE point; the two always differ by
// the current structural length.
struct PlantState {
  JointVector q{JointVector::Zero()};
  JointVector qd{JointVector::Zero()};
  VscLink vsc_proximal;
  VscLink vsc_distal;
  AgiState agi;
  double body_displacement = 0.0;
  double ee_displacement = 2.0 * kVscMaxLength;
  bool anchored = false;
};

// First-order (qd = tau/b) or second-order joint dynamics, with limits
// enforced by clamping and zeroing the velocity at the stop.
void step_joints(PlantState& state, const JointVector& tau_applied, double dt,
                 const PlantParams& p);

// Contracts when the wire beats the spring, extends otherwise, rate limited.
// Locks rigid at minimum length; unlocking requires the tension to drop
// below the spring force.
void step_vsc(VscLink& link, double tension, double dt, const PlantParams& p);

// Finger state machine. The open lock ignores external loads and releases
// only when the wire tension rises above the close threshold.
void step_agi_ee(AgiState& ee, double tension, double external_load, double dt,
                 const PlantParams& p);

// 1-D track bookkeeping. While anchored the AGI-EE holds (minus slip) and
// length changes move the shoulder; while free the shoulder holds and length
// changes move the AGI-EE.
void step_body(PlantState& state, double prox_before, double dist_before, const PlantParams& p);

enum class TensionFeedback { MotorSide, DistalSide };

struct MotorObservation {
  WireVector tensions{WireVector::Zero()};  // what the winch modules measure [N]
  Eigen::Vector4d angles{Eigen::Vector4d::Zero()};  // winch angles [rad]
};

// What the motor-unit senses for the four coupled wires: winch angles carry
// the plant-side wire displacement (joint term plus proximal VSC take-up)
// plus elastic stretch; tension feedback is motor-side by default.
MotorObservation observe(const PlantState& state, const TendonJacobian& G,
                         const WireVector& f_motor, const WireVector& f_distal,
                         TensionFeedback feedback, const ActuationConstants& c);

}  // namespace rwd
