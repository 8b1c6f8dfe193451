#pragma once

#include "rwdrive/model.hpp"
#include "rwdrive/sim_log.hpp"
#include "rwdrive/types.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace rwd {

// Uniformly sampled signal.
struct TimeSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  size_t size() const { return values.size(); }
};

struct NccResult {
  double ncc = 0.0;
  int delay = 0;  // samples by which the second series lags the first
};

// Maximizes the normalized cross-correlation of y(t) against z(t + d) over
// integer delays d in [0, max_delay]; ties resolve to the smallest delay.
NccResult ncc_with_delay(const TimeSeries& y, const TimeSeries& z, int max_delay);

// Mean squared difference over the overlap of y(t) and z(t + delay).
double mse(const TimeSeries& y, const TimeSeries& z, int delay);

struct LoopEfficiency {
  double mean = 0.0;
  double stddev = 0.0;
};

// Output/input tension ratio over the rising phase of the input, ignoring
// samples below the tension floor. The rising phase is the longest run where
// the input does not drop by more than noise_tol per sample and rises by
// more than noise_tol overall.
LoopEfficiency efficiency_from_loop(const TimeSeries& input, const TimeSeries& output,
                                    double tension_floor = 20.0, double noise_tol = 2.0);

struct PoseError {
  double position = 0.0;     // m
  double orientation = 0.0;  // rad, in [0, pi]
};

PoseError ee_pose_error(const Pose& target, const Pose& actual);

struct PairingScore {
  std::array<double, 3> ncc{};
  std::array<int, 3> delay{};
  std::array<double, 3> mse{};  // at the NCC-maximizing delay
  double ncc_mean = 0.0;
  double mse_mean = 0.0;
};

struct EvaluationReport {
  PairingScore follower;    // target vs estimated angle
  PairingScore estimator;   // plant vs estimated angle
  PairingScore integrated;  // target vs plant angle
  double ee_position_error = 0.0;     // mean over the run [m]
  double ee_orientation_error = 0.0;  // mean over the run [rad]

  void write(std::ostream& out) const;  // plain text, 17 significant digits
};

// Scores the three pairings per joint plus end-effector pose errors through
// the forward kinematics (prismatic taken from the logged proximal VSC).
EvaluationReport evaluate_run(const SimulationLog& log, const KinematicChain& chain,
                              int max_delay = 50);

}  // namespace rwd
