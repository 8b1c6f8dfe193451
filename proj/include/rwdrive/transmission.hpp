#pragma once

#include "rwdrive/types.hpp"

#include <vector>

namespace rwd {

// Parameters of one motor-to-robot wire path: a chain of decoupled joints in
// series with tendon-sheath segments.
struct TransmissionConfig {
  int n_joints = 4;            // decoupled joints in the chain
  double eta_dj = 0.97;        // efficiency per decoupled joint, interface friction folded in
  double mu_tsm = 0.085;       // sheath friction coefficient
  double theta_tsm = 0.0;      // cumulative sheath bend imposed by the environment [rad]
  double stiction_band = 0.0;  // breakaway tension imbalance [N]
  std::vector<double> joint_bends;  // optional per-joint bends, each within +/- 3*pi/4

  void validate() const;
  static TransmissionConfig identity();  // lossless, no stiction
};

// Capstan law for a tendon-sheath run: exp(-mu * alpha).
double tsm_efficiency(double mu, double alpha);

// Efficiency of n series-connected decoupled joints: eta_dj^n.
double chain_efficiency(double eta_dj, int n);

// Fraction of the joint-chain angle range over which the decoupled chain
// transmits better than a sheath bent by the same cumulative angle:
// 1 - 4 ln(1/eta_dj) / (3 pi mu), clamped to [0, 1].
double superiority_fraction(double eta_dj, double mu);

// Total transmission efficiency: chain_efficiency * tsm_efficiency.
double rwtm_efficiency(const TransmissionConfig& cfg);

enum class WireMotion { Raising, Lowering, Stuck };

// Per-wire output-side state of the stiction/hysteresis model.
struct HysteresisState {
  double output = 0.0;  // tension on the robot side [N]
  WireMotion motion = WireMotion::Stuck;
};

// Friction-cone stiction model. The admissible output band for an input u is
// [eta*u, u/eta]; while the current output sits within that band (widened by
// the stiction band) the wire is stuck, otherwise the output snaps to the
// violated branch. Reproduces the rising-branch eta*u / falling-branch u/eta
// hysteresis loop.
double propagate_tension(double input, HysteresisState& state, const TransmissionConfig& cfg);

// Mass and traction budget of a transmission line.
struct DesignBudget {
  double m_dec = 0.34;   // kg per decoupled joint
  double l_dec = 0.096;  // m of sheath displaced per joint
  double m_tsm = 0.36;   // kg per meter of sheath bundle
  double m_tip = 3.0;    // distal robot mass [kg]
  double mu_tip = 0.5;   // distal robot traction coefficient
  double mu_rwtm = 0.3;  // transmission drag coefficient on the ground

  void validate() const;
};

// (m_dec - m_tsm*l_dec) * n + m_tsm * l_total.
double total_mass(int n, double l_total, const DesignBudget& budget);

struct TractionCheck {
  bool feasible;  // m_tip*mu_tip >= total_mass*mu_rwtm
  double margin;  // difference, kilogram-force equivalents
};
TractionCheck traction_feasible(int n, double l_total, const DesignBudget& budget);

struct TsmAngleBudget {
  double angle = 0.0;     // largest sheath bend keeping total efficiency >= threshold [rad]
  bool feasible = false;  // the joint chain alone meets the threshold
  bool unbounded = false; // mu == 0 with a feasible chain: any bend is fine
};
TsmAngleBudget max_tsm_angle_for_efficiency(int n, double eta_dec, double mu_tsm,
                                            double threshold);

}  // namespace rwd
