#pragma once

#include "rwdrive/controller.hpp"
#include "rwdrive/model.hpp"
#include "rwdrive/plant.hpp"
#include "rwdrive/sim_log.hpp"
#include "rwdrive/transmission.hpp"
#include "rwdrive/types.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rwd {

// The five-phase gait, always executed in this order.
enum class PeristalsisPhase {
  AnchorOpen = 0,       // open the AGI-EE and hook it
  ProximalContract = 1, // contract the proximal VSC, shoulder forward
  SwapContract = 2,     // contract distal while extending proximal, elbow forward
  AnchorClose = 3,      // close the AGI-EE, release the hook
  DistalExtend = 4,     // extend the distal VSC, AGI-EE forward
};

const char* to_string(PeristalsisPhase phase);

// A peristalsis phase did not complete within its timeout.
class PhaseTimeoutError : public std::runtime_error {
public:
  PhaseTimeoutError(PeristalsisPhase phase, double timeout);
  PeristalsisPhase phase() const { return phase_; }

private:
  PeristalsisPhase phase_;
};

struct ScenarioStep {
  enum class Kind { SetMode, SetTarget, RandomTargets, RunPeristalsis, SetBinary, Wait };
  Kind kind = Kind::Wait;

  ModeCommand mode = ModeCommand::JointControl;         // SetMode
  JointVector target{JointVector::Zero()};              // SetTarget
  int count = 0;                                        // RandomTargets
  double hold = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int cycles = 0;                                       // RunPeristalsis
  BinaryTarget binary = BinaryTarget::AgiEndEffector;   // SetBinary
  bool engage = false;
  double duration = 0.0;                                // Wait
};

struct Scenario {
  double dt = 0.01;
  std::uint64_t seed = 1;
  std::array<double, 5> phase_timeouts{10.0, 10.0, 10.0, 10.0, 10.0};
  std::vector<ScenarioStep> steps;

  void validate() const;
};

// Everything a run needs besides the scenario itself.
struct SimConfig {
  TendonJacobian jacobian = TendonJacobian::gcd_joints();
  KinematicChain chain;
  TransmissionConfig transmission;
  ActuationConstants actuation;
  PidGains gains;
  PlantParams plant;
  bool discretize_torque = false;
  TensionFeedback feedback = TensionFeedback::MotorSide;

  void validate() const;
};

// One closed-loop simulation: estimator/follower controller, six wire
// transmissions, and the simulated plant, advanced tick by tick.
class Simulation {
public:
  Simulation(const SimConfig& config, const Scenario& scenario);

  void tick();

  void command_mode(ModeCommand cmd);
  void set_target(const JointVector& q_ref);
  void set_binary(BinaryTarget target, bool engage);
  void run_for(double seconds);

  // Executes the five phases once; returns the body displacement gained.
  double peristalsis_cycle();

  double random_uniform(double lo, double hi);  // deterministic, seeded draw

  double time() const { return time_; }
  const PlantState& plant() const { return plant_; }
  const ControllerState& controller() const { return controller_; }
  const JointVector& target() const { return q_ref_; }
  SimulationLog& log() { return log_; }
  const SimulationLog& log() const { return log_; }

private:
  void run_phase(PeristalsisPhase phase);
  bool phase_complete(PeristalsisPhase phase) const;

  SimConfig cfg_;
  Scenario scenario_;
  double dt_;
  double time_ = 0.0;
  int phase_code_ = -1;

  ControllerState controller_;
  PlantState plant_;
  JointVector q_ref_{JointVector::Zero()};
  bool agi_engaged_ = false;
  bool distal_engaged_ = false;

  // Wires 0..3 drive the joints, 4 the distal VSC, 5 the AGI-EE.
  std::array<HysteresisState, 6> wires_{};
  WireVector f_cmd_{WireVector::Zero()};
  WireVector f_plant_{WireVector::Zero()};
  double f_cmd_distal_ = 0.0;
  double f_plant_distal_ = 0.0;
  double f_cmd_agi_ = 0.0;
  double f_plant_agi_ = 0.0;

  std::mt19937 rng_;
  SimulationLog log_;
};

// Validates everything, then executes the steps in order. Identical inputs
// produce identical logs.
SimulationLog run_scenario(const Scenario& scenario, const SimConfig& config);

}  // namespace rwd
