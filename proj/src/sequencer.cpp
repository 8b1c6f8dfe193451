#include "rwdrive/sequencer.hpp"

#include <cmath>

namespace rwd {

const char* to_string(PeristalsisPhase phase) {
  switch (phase) {
    case PeristalsisPhase::AnchorOpen: return "anchor_open";
    case PeristalsisPhase::ProximalContract: return "proximal_contract";
    case PeristalsisPhase::SwapContract: return "swap_contract";
    case PeristalsisPhase::AnchorClose: return "anchor_close";
    case PeristalsisPhase::DistalExtend: return "distal_extend";
  }
  return "?";
}

PhaseTimeoutError::PhaseTimeoutError(PeristalsisPhase phase, double timeout)
    : std::runtime_error(std::string("peristalsis phase '") + to_string(phase) +
                         "' did not complete within " + std::to_string(timeout) + " s"),
      phase_(phase) {}

void Scenario::validate() const {
  if (!(dt > 0.0)) throw std::domain_error("scenario dt must be positive");
  for (double t : phase_timeouts) {
    if (!(t > 0.0)) throw std::domain_error("phase timeouts must be positive");
  }
  for (const auto& s : steps) {
    switch (s.kind) {
      case ScenarioStep::Kind::Wait:
        if (s.duration < 0.0) throw std::domain_error("wait duration must be non-negative");
        break;
      case ScenarioStep::Kind::RandomTargets:
        if (s.count < 0 || !(s.hold > 0.0) || s.lo > s.hi) {
          throw std::domain_error("random-target step needs count >= 0, hold > 0, lo <= hi");
        }
        if (std::abs(s.lo) > kJointLimitRad || std::abs(s.hi) > kJointLimitRad) {
          throw std::domain_error("random-target range exceeds the joint limits");
        }
        break;
      case ScenarioStep::Kind::SetTarget:
        for (int i = 0; i < 3; ++i) {
          if (std::abs(s.target[i]) > kJointLimitRad) {
            throw std::domain_error("target angle exceeds the joint limits");
          }
        }
        break;
      case ScenarioStep::Kind::RunPeristalsis:
        if (s.cycles < 0) throw std::domain_error("cycle count must be non-negative");
        break;
      default:
        break;
    }
  }
}

void SimConfig::validate() const {
  jacobian.validate();
  chain.validate();
  transmission.validate();
  actuation.validate();
  gains.validate();
  plant.validate();
}

Simulation::Simulation(const SimConfig& config, const Scenario& scenario)
    : cfg_(config), scenario_(scenario), dt_(scenario.dt), rng_(static_cast<std::uint32_t>(scenario.seed)) {
  cfg_.validate();
  scenario_.validate();
  plant_.vsc_proximal.length = cfg_.plant.vsc_max;
  plant_.vsc_distal.length = cfg_.plant.vsc_max;
  plant_.ee_displacement = 2.0 * cfg_.plant.vsc_max;
  log_.seed = scenario.seed;
  log_.dt = scenario.dt;
}

double Simulation::random_uniform(double lo, double hi) {
  // Scale raw 32-bit draws directly so results do not depend on the
  // standard library's distribution implementation.
  const double u = static_cast<double>(rng_()) / 4294967296.0;
  return lo + (hi - lo) * u;
}

void Simulation::command_mode(ModeCommand cmd) { step_mode(controller_, cmd); }

void Simulation::set_target(const JointVector& q_ref) { q_ref_ = q_ref; }

void Simulation::set_binary(BinaryTarget target, bool engage) {
  if (target == BinaryTarget::AgiEndEffector) {
    agi_engaged_ = engage;
  } else {
    distal_engaged_ = engage;
  }
}

void Simulation::tick() {
  // Sense: winch angles reflect the plant state at the end of the previous
  // tick, tensions the commands still held by the motors.
  const MotorObservation obs =
      observe(plant_, cfg_.jacobian, f_cmd_, f_plant_, cfg_.feedback, cfg_.actuation);

  switch (controller_.mode) {
    case ControlMode::Initialization: {
      capture_offset(controller_, obs.angles);  // latest capture wins
      controller_.f_ref.setConstant(cfg_.actuation.init_tension);
      controller_.tau_ref.setZero();
      break;
    }
    case ControlMode::Expansion: {
      controller_.f_ref.setZero();
      controller_.tau_ref.setZero();
      break;
    }
    case ControlMode::JointControl: {
      const Eigen::Vector4d theta = obs.angles - controller_.motor_offset;
      const WireVector l_hat =
          estimate_wire_lengths(theta, obs.tensions, cfg_.actuation);
      const WireVector l_tilde = center_wire_lengths(l_hat);
      Eigen::Vector4d weights;
      for (int i = 0; i < 4; ++i) weights[i] = wire_weight(obs.tensions[i]);
      try {
        controller_.q_hat = estimate_joint_angles(l_tilde, weights, cfg_.jacobian);
      } catch (const EstimationError&) {
        // Right after expansion the wires are still slack and carry no
        // information; hold the last estimate until tension returns.
      }

      JointVector tau = pid_torque(q_ref_, controller_.q_hat, dt_, cfg_.gains, controller_.pid);
      if (cfg_.discretize_torque) tau = discretize_torque(tau, cfg_.actuation.torque_quantum);
      const TensionSolution sol = tensions_from_torque(tau, cfg_.jacobian, cfg_.actuation);
      controller_.tau_ref = tau;
      controller_.f_ref = sol.tensions;
      break;
    }
  }
  controller_.t_ref = motor_torque_from_tension(controller_.f_ref, cfg_.actuation);

  // Actuate: six wires through their transmission lines.
  f_cmd_ = controller_.f_ref;
  f_cmd_distal_ = binary_actuator_command(BinaryTarget::DistalVsc, distal_engaged_, cfg_.actuation);
  f_cmd_agi_ = binary_actuator_command(BinaryTarget::AgiEndEffector, agi_engaged_, cfg_.actuation);
  for (int i = 0; i < 4; ++i) {
    f_plant_[i] = propagate_tension(f_cmd_[i], wires_[static_cast<size_t>(i)], cfg_.transmission);
  }
  f_plant_distal_ = propagate_tension(f_cmd_distal_, wires_[4], cfg_.transmission);
  f_plant_agi_ = propagate_tension(f_cmd_agi_, wires_[5], cfg_.transmission);

  // Plant.
  const double prox_before = plant_.vsc_proximal.length;
  const double dist_before = plant_.vsc_distal.length;
  const JointVector tau_applied = joint_torques_from_tensions(f_plant_, cfg_.jacobian);
  step_joints(plant_, tau_applied, dt_, cfg_.plant);
  step_vsc(plant_.vsc_proximal, f_plant_.sum(), dt_, cfg_.plant);
  step_vsc(plant_.vsc_distal, f_plant_distal_, dt_, cfg_.plant);
  step_agi_ee(plant_.agi, f_plant_agi_, 0.0, dt_, cfg_.plant);
  step_body(plant_, prox_before, dist_before, cfg_.plant);

  LogRow row;
  row.t = time_;
  row.mode = static_cast<int>(controller_.mode);
  row.phase = phase_code_;
  for (int i = 0; i < 3; ++i) {
    row.q_ref[static_cast<size_t>(i)] = q_ref_[i];
    row.q_hat[static_cast<size_t>(i)] = controller_.q_hat[i];
    row.q_plant[static_cast<size_t>(i)] = plant_.q[i];
  }
  for (int i = 0; i < 4; ++i) {
    row.f_motor[static_cast<size_t>(i)] = f_cmd_[i];
    row.f_plant[static_cast<size_t>(i)] = f_plant_[i];
    row.theta_motor[static_cast<size_t>(i)] = obs.angles[i];
  }
  row.vsc_prox = plant_.vsc_proximal.length;
  row.vsc_dist = plant_.vsc_distal.length;
  row.agi_state = static_cast<int>(plant_.agi.phase);
  row.displacement = plant_.body_displacement;
  log_.rows.push_back(row);

  time_ += dt_;
}

void Simulation::run_for(double seconds) {
  const long ticks = std::lround(seconds / dt_);
  for (long i = 0; i < ticks; ++i) tick();
}

bool Simulation::phase_complete(PeristalsisPhase phase) const {
  const double len_eps = 1e-12;
  switch (phase) {
    case PeristalsisPhase::AnchorOpen:
      return plant_.agi.phase == AgiPhase::FullyOpenLocked &&
             plant_.vsc_proximal.length >= cfg_.plant.vsc_max - len_eps;
    case PeristalsisPhase::ProximalContract:
      return plant_.vsc_proximal.locked;
    case PeristalsisPhase::SwapContract:
      return plant_.vsc_distal.locked &&
             plant_.vsc_proximal.length >= cfg_.plant.vsc_max - len_eps;
    case PeristalsisPhase::AnchorClose:
      return plant_.agi.phase == AgiPhase::Closed;
    case PeristalsisPhase::DistalExtend:
      return plant_.vsc_distal.length >= cfg_.plant.vsc_max - len_eps;
  }
  return false;
}

void Simulation::run_phase(PeristalsisPhase phase) {
  phase_code_ = static_cast<int>(phase);
  switch (phase) {
    case PeristalsisPhase::AnchorOpen:
      command_mode(ModeCommand::Expand);  // keep the proximal link extended
      set_binary(BinaryTarget::AgiEndEffector, false);
      break;
    case PeristalsisPhase::ProximalContract:
      command_mode(ModeCommand::JointControl);  // total tension contracts the link
      break;
    case PeristalsisPhase::SwapContract:
      command_mode(ModeCommand::Expand);  // slack lets the spring extend the proximal link
      set_binary(BinaryTarget::DistalVsc, true);
      break;
    case PeristalsisPhase::AnchorClose:
      set_binary(BinaryTarget::AgiEndEffector, true);
      break;
    case PeristalsisPhase::DistalExtend:
      set_binary(BinaryTarget::DistalVsc, false);
      break;
  }
  const double timeout = scenario_.phase_timeouts[static_cast<size_t>(phase)];
  const long max_ticks = std::lround(timeout / dt_);
  for (long i = 0; i < max_ticks; ++i) {
    tick();
    if (phase_complete(phase)) return;
  }
  if (!phase_complete(phase)) throw PhaseTimeoutError(phase, timeout);
}

double Simulation::peristalsis_cycle() {
  const double start = plant_.body_displacement;
  run_phase(PeristalsisPhase::AnchorOpen);
  run_phase(PeristalsisPhase::ProximalContract);
  run_phase(PeristalsisPhase::SwapContract);
  run_phase(PeristalsisPhase::AnchorClose);
  run_phase(PeristalsisPhase::DistalExtend);
  phase_code_ = -1;
  return plant_.body_displacement - start;
}

SimulationLog run_scenario(const Scenario& scenario, const SimConfig& config) {
  config.validate();
  scenario.validate();

  Simulation sim(config, scenario);
  for (const auto& step : scenario.steps) {
    switch (step.kind) {
      case ScenarioStep::Kind::SetMode:
        sim.command_mode(step.mode);
        break;
      case ScenarioStep::Kind::SetTarget:
        sim.set_target(step.target);
        break;
      case ScenarioStep::Kind::RandomTargets:
        for (int i = 0; i < step.count; ++i) {
          JointVector q;
          for (int j = 0; j < 3; ++j) q[j] = sim.random_uniform(step.lo, step.hi);
          sim.set_target(q);
          sim.run_for(step.hold);
        }
        break;
      case ScenarioStep::Kind::RunPeristalsis:
        for (int i = 0; i < step.cycles; ++i) sim.peristalsis_cycle();
        break;
      case ScenarioStep::Kind::SetBinary:
        sim.set_binary(step.binary, step.engage);
        break;
      case ScenarioStep::Kind::Wait:
        sim.run_for(step.duration);
        break;
    }
  }
  return std::move(sim.log());
}

}  // namespace rwd
