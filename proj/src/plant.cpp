#include "rwdrive/plant.hpp"

#include <algorithm>
#include <cmath>

namespace rwd {

void PlantParams::validate() const {
  if (damping.minCoeff() <= 0.0) throw std::domain_error("joint damping must be positive");
  if (inertia.minCoeff() < 0.0) throw std::domain_error("joint inertia must be non-negative");
  if (!(joint_limit > 0.0)) throw std::domain_error("joint limit must be positive");
  if (!(vsc_min > 0.0) || vsc_min > vsc_max) throw std::domain_error("VSC bounds invalid");
  if (vsc_spring_max < 0.0 || vsc_speed <= 0.0) throw std::domain_error("VSC params invalid");
  if (agi_spring_max < 0.0 || agi_close_threshold < 0.0 || agi_moment_arm <= 0.0 ||
      agi_damping <= 0.0 || agi_closed_angle <= 0.0 || agi_torque_min > agi_torque_max) {
    throw std::domain_error("AGI-EE params invalid");
  }
  if (slip < 0.0 || slip > 1.0) throw std::domain_error("slip must be in [0, 1]");
}

void step_joints(PlantState& state, const JointVector& tau_applied, double dt,
                 const PlantParams& p) {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  p.validate();
  for (int i = 0; i < 3; ++i) {
    if (p.inertia[i] > 0.0) {
      const double qdd = (tau_applied[i] - p.damping[i] * state.qd[i]) / p.inertia[i];
      state.qd[i] += qdd * dt;
    } else {
      state.qd[i] = tau_applied[i] / p.damping[i];
    }
    state.q[i] += state.qd[i] * dt;
    if (state.q[i] > p.joint_limit) {
      state.q[i] = p.joint_limit;
      state.qd[i] = 0.0;
    } else if (state.q[i] < -p.joint_limit) {
      state.q[i] = -p.joint_limit;
      state.qd[i] = 0.0;
    }
  }
}

void step_vsc(VscLink& link, double tension, double dt, const PlantParams& p) {
  if (tension < 0.0) throw std::domain_error("tension must be non-negative");
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  if (link.locked) {
    if (tension < p.vsc_spring_max) {
      link.locked = false;  // wire released, spring may extend again
    } else {
      return;
    }
  }
  if (tension > p.vsc_spring_max) {
    link.length -= p.vsc_speed * dt;
  } else if (tension < p.vsc_spring_max) {
    link.length += p.vsc_speed * dt;
  }
  link.length = std::clamp(link.length, p.vsc_min, p.vsc_max);
  if (link.length <= p.vsc_min) {
    link.length = p.vsc_min;
    link.locked = true;
  }
}

void step_agi_ee(AgiState& ee, double tension, double external_load, double dt,
                 const PlantParams& p) {
  if (tension < 0.0) throw std::domain_error("tension must be non-negative");
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  if (ee.phase == AgiPhase::FullyOpenLocked) {
    // Locked open: external loads cannot close it.
    if (tension >= p.agi_close_threshold) {
      ee.phase = AgiPhase::Partial;
    } else {
      return;
    }
  }
  const double torque = std::clamp(
      p.agi_moment_arm * (tension - p.agi_spring_max) + external_load,
      p.agi_torque_min, p.agi_torque_max);
  ee.angle += dt * torque / p.agi_damping;
  if (ee.angle >= p.agi_closed_angle) {
    ee.angle = p.agi_closed_angle;
    ee.phase = AgiPhase::Closed;
  } else if (ee.angle <= 0.0) {
    ee.angle = 0.0;
    ee.phase = AgiPhase::FullyOpenLocked;
  } else {
    ee.phase = AgiPhase::Partial;
  }
}

void step_body(PlantState& state, double prox_before, double dist_before, const PlantParams& p) {
  state.anchored = state.agi.phase == AgiPhase::FullyOpenLocked;
  const double length = state.vsc_proximal.length + state.vsc_distal.length;
  const double delta = length - (prox_before + dist_before);
  if (state.anchored) {
    state.ee_displacement += p.slip * delta;
    state.body_displacement = state.ee_displacement - length;
  } else {
    state.ee_displacement = state.body_displacement + length;
  }
}

MotorObservation observe(const PlantState& state, const TendonJacobian& G,
                         const WireVector& f_motor, const WireVector& f_distal,
                         TensionFeedback feedback, const ActuationConstants& c) {
  // Plant-side wire displacement: joint coupling plus the uniform take-up of
  // the proximal VSC, referenced to its fully extended length.
  WireVector l_plant = G.entries * state.q;
  l_plant.array() += kVscMaxLength - state.vsc_proximal.length;

  MotorObservation obs;
  obs.angles = (l_plant + c.elongation_k * f_motor) / c.r_pulley;
  obs.tensions = feedback == TensionFeedback::MotorSide ? f_motor : f_distal;
  return obs;
}

}  // namespace rwd
