#pragma once

#include "rwdrive/types.hpp"

#include <array>
#include <optional>
#include <vector>

namespace rwd {

// Constant moment-arm matrix of the coupled wire drive.
// entries(i, j) is the moment arm of wire i around joint j [m].
// The arc-shaped wire paths of the GCD-Joints keep it independent of the
// joint angles, which is what makes angle estimation a linear problem.
struct TendonJacobian {
  Eigen::Matrix<double, 4, 3> entries;

  // Production geometry: 30 mm gear pitch radius, turn-back on the wires
  // of joint 1 for a 2x reduction.
  static TendonJacobian gcd_joints();

  // Checks the structural invariants: every column sums to zero (equal
  // tensions exert no torque) and the rank is 3.
  void validate() const;
};

// l = G q. Element sum of the result is zero for any q.
WireVector wire_lengths_from_angles(const JointVector& q, const TendonJacobian& G);

// tau = -G^T F, from the principle of virtual work. Tensions must be >= 0.
JointVector joint_torques_from_tensions(const WireVector& tensions, const TendonJacobian& G);

// Achievable joint torques for a box of admissible tensions, optionally
// intersected with a fixed total-tension plane.
struct TorquePolytope {
  std::vector<Eigen::Vector3d> vertices;  // extreme points, deduplicated
  double f_min = 0.0;
  double f_max = 0.0;
  std::optional<double> sum_constraint;
};

TorquePolytope torque_polytope(const TendonJacobian& G, double f_min, double f_max,
                               std::optional<double> sum_constraint = std::nullopt);

// Largest tau_j achievable with the other joints commanded to zero torque,
// per joint. Solved exactly by enumerating active-bound sets.
JointVector max_independent_torque(const TendonJacobian& G, double f_min, double f_max,
                                   std::optional<double> sum_constraint = std::nullopt);

enum class JointAxis { Pitch, Yaw };

// Serial chain of the distal robot: base -> joint1 -> link1 -> joint2 ->
// link2 -> joint3 -> link3 -> end effector. One link is the contract link
// and its length is supplied per call (the virtual prismatic joint).
struct KinematicChain {
  std::array<JointAxis, 3> joint_axes{JointAxis::Pitch, JointAxis::Pitch, JointAxis::Yaw};
  std::array<double, 3> link_lengths{0.2435, 0.2, 0.2};
  int prismatic_link = 0;  // index into link_lengths
  double prismatic_min = kVscMinLength;
  double prismatic_max = kVscMaxLength;
  double joint_limit = kJointLimitRad;

  void validate() const;
};

struct Pose {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  Eigen::Quaterniond orientation{Eigen::Quaterniond::Identity()};

  void validate() const;  // orientation normalized to 1e-9
};

Pose forward_kinematics(const JointVector& q, double prismatic, const KinematicChain& chain);

// Angle of the relative rotation between two unit quaternions, in [0, pi].
double rotation_angle_between(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b);

struct IkOptions {
  double orientation_weight = 0.1;  // rad-to-m exchange rate in the cost
  int max_cycles = 200;
  int max_restarts = 12;             // perturbed restarts when a search gets trapped
  double cost_tol = 1e-14;           // stop when a full cycle improves less than this
  double converged_residual = 1e-6;  // residual below which the solve counts as converged
};

struct IkResult {
  JointVector q{JointVector::Zero()};
  double prismatic = 0.0;
  double residual = 0.0;  // position error + weight * orientation angle at the solution
  bool converged = false;
  int cycles = 0;
};

// Direction-set (coordinate-cycling) minimization of the pose error, seeded
// at the warm start. Gradient-free; intended to be warm-started from the
// previous solution when tracking.
IkResult solve_ik(const Pose& target, const JointVector& warm_q, double warm_prismatic,
                  const KinematicChain& chain, const IkOptions& opts = {});

}  // namespace rwd
