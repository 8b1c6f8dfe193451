#include "rwdrive/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwd {

void ActuationConstants::validate() const {
  if (!(r_pulley > 0.0) || !(elongation_k > 0.0)) {
    throw std::domain_error("winch radius and elongation must be positive");
  }
  if (!(0.0 < f_min && f_min < f_contract && f_contract < 4.0 * f_max)) {
    throw std::domain_error("tension schedule requires 0 < f_min < f_contract < 4*f_max");
  }
  if (f_min >= f_max) throw std::domain_error("f_min must be below f_max");
  if (torque_quantum <= 0.0) throw std::domain_error("torque quantum must be positive");
  if (init_tension < 0.0) throw std::domain_error("init tension must be non-negative");
}

void PidGains::validate() const {
  if (kp.minCoeff() < 0.0 || ki.minCoeff() < 0.0 || kd.minCoeff() < 0.0) {
    throw std::domain_error("PID gains must be non-negative");
  }
  if (integral_clamp < 0.0) throw std::domain_error("integral clamp must be non-negative");
}

void capture_offset(ControllerState& state, const Eigen::Vector4d& motor_angles) {
  if (state.mode != ControlMode::Initialization) {
    throw StateError("offset capture is only legal in initialization mode");
  }
  if (!motor_angles.allFinite()) throw std::domain_error("motor angles must be finite");
  state.motor_offset = motor_angles;
  state.offset_captured = true;
}

WireVector estimate_wire_lengths(const Eigen::Vector4d& theta, const WireVector& tensions,
                                 const ActuationConstants& c) {
  if (tensions.minCoeff() < 0.0) throw std::domain_error("tensions must be non-negative");
  return c.r_pulley * theta - c.elongation_k * tensions;
}

WireVector center_wire_lengths(const WireVector& l_hat) {
  return l_hat.array() - l_hat.mean();
}

double wire_weight(double tension) {
  if (tension < 0.0) throw std::domain_error("tension must be non-negative");
  if (tension == 0.0) return 0.0;  // slack wire carries no length information
  if (tension < 10.0) return 0.5;
  return std::exp(-(tension - 10.0) / 1000.0);
}

JointVector estimate_joint_angles(const WireVector& l_tilde, const Eigen::Vector4d& weights,
                                  const TendonJacobian& G) {
  if (weights.minCoeff() < 0.0) throw std::domain_error("weights must be non-negative");
  const Eigen::Matrix3d A =
      G.entries.transpose() * weights.asDiagonal() * G.entries;
  const JointVector b = G.entries.transpose() * weights.asDiagonal() * l_tilde;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(A);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > lmax * 1e-12) || lmax <= 0.0) {
    const double cond =
        lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    throw EstimationError("weighted normal equations are singular; fewer than three "
                          "effectively weighted independent wires",
                          cond);
  }
  return A.ldlt().solve(b);
}

JointVector pid_torque(const JointVector& q_ref, const JointVector& q_hat, double dt,
                       const PidGains& gains, PidState& state) {
  if (!(dt > 0.0)) throw std::domain_error("dt must be positive");
  gains.validate();
  const JointVector error = q_ref - q_hat;
  state.integral += gains.ki.cwiseProduct(error) * dt;
  for (int i = 0; i < 3; ++i) {
    state.integral[i] = std::clamp(state.integral[i], -gains.integral_clamp,
                                   gains.integral_clamp);
  }
  JointVector derivative = JointVector::Zero();
  if (state.has_prev) derivative = (error - state.prev_error) / dt;
  state.prev_error = error;
  state.has_prev = true;
  return gains.kp.cwiseProduct(error) + state.integral + gains.kd.cwiseProduct(derivative);
}

JointVector discretize_torque(const JointVector& tau, double quantum) {
  if (!(quantum > 0.0)) throw std::domain_error("torque quantum must be positive");
  JointVector out;
  for (int i = 0; i < 3; ++i) out[i] = quantum * std::round(tau[i] / quantum);
  return out;
}

TensionSolution tensions_from_torque(const JointVector& tau_ref, const TendonJacobian& G,
                                     const ActuationConstants& c) {
  c.validate();
  TensionSolution sol;

  // Minimum-norm particular solution of tau = -G^T F; it has zero element
  // sum because the all-ones vector spans the null space of G^T.
  const Eigen::Matrix3d gtg = G.entries.transpose() * G.entries;
  const JointVector y = gtg.ldlt().solve(tau_ref);
  WireVector particular = -G.entries * y;

  const double box = c.f_max - c.f_min;
  const double spread = particular.maxCoeff() - particular.minCoeff();
  if (spread > box) {
    sol.torque_scale = box / spread;
    sol.torque_scaled = true;
    particular *= sol.torque_scale;
  }

  double t_lo = c.f_min - particular.minCoeff();
  double t_hi = c.f_max - particular.maxCoeff();
  if (t_lo > t_hi) t_lo = t_hi = 0.5 * (t_lo + t_hi);

  const double t_star = (c.f_contract - particular.sum()) / 4.0;
  const double t = std::clamp(t_star, t_lo, t_hi);
  sol.sum_clamped = t != t_star;

  sol.tensions = particular.array() + t;
  sol.torque_achieved = -G.entries.transpose() * sol.tensions;
  sol.tension_sum = sol.tensions.sum();
  sol.sum_residual = sol.tension_sum - c.f_contract;
  return sol;
}

Eigen::Vector4d motor_torque_from_tension(const WireVector& f_ref, const ActuationConstants& c) {
  return c.r_pulley * f_ref;
}

void step_mode(ControllerState& state, ModeCommand command) {
  switch (command) {
    case ModeCommand::InitDone:
      if (state.mode != ControlMode::Initialization) {
        throw StateError("init_done is only legal in initialization mode");
      }
      state.mode = ControlMode::JointControl;
      state.pid = PidState{};
      break;
    case ModeCommand::Expand:
      state.mode = ControlMode::Expansion;
      state.f_ref.setZero();
      state.t_ref.setZero();
      state.tau_ref.setZero();
      break;
    case ModeCommand::JointControl:
      if (state.mode != ControlMode::JointControl) state.pid = PidState{};
      state.mode = ControlMode::JointControl;
      break;
  }
}

double binary_actuator_command(BinaryTarget target, bool engage, const ActuationConstants& c) {
  if (!engage) return 0.0;
  return target == BinaryTarget::AgiEndEffector ? c.agi_close_tension : c.distal_vsc_tension;
}

}  // namespace rwd
