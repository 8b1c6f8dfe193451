#include "rwdrive/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwd {

void TransmissionConfig::validate() const {
  if (n_joints < 0) throw std::domain_error("joint count must be non-negative");
  if (!(eta_dj > 0.0) || eta_dj > 1.0) throw std::domain_error("eta_dj must be in (0, 1]");
  if (mu_tsm < 0.0) throw std::domain_error("mu_tsm must be non-negative");
  if (theta_tsm < 0.0) throw std::domain_error("theta_tsm must be non-negative");
  if (stiction_band < 0.0) throw std::domain_error("stiction band must be non-negative");
  for (double b : joint_bends) {
    if (std::abs(b) > kDecoupledBendLimit + 1e-12) {
      throw std::domain_error("decoupled-joint bend exceeds +/- 3*pi/4 rad");
    }
  }
}

TransmissionConfig TransmissionConfig::identity() {
  TransmissionConfig cfg;
  cfg.n_joints = 0;
  cfg.eta_dj = 1.0;
  cfg.mu_tsm = 0.0;
  cfg.theta_tsm = 0.0;
  cfg.stiction_band = 0.0;
  return cfg;
}

double tsm_efficiency(double mu, double alpha) {
  if (mu < 0.0 || alpha < 0.0) {
    throw std::domain_error("capstan efficiency requires mu >= 0 and alpha >= 0");
  }
  return std::exp(-mu * alpha);
}

double chain_efficiency(double eta_dj, int n) {
  if (!(eta_dj > 0.0) || eta_dj > 1.0) throw std::domain_error("eta_dj must be in (0, 1]");
  if (n < 0) throw std::domain_error("joint count must be non-negative");
  return std::pow(eta_dj, n);
}

double superiority_fraction(double eta_dj, double mu) {
  if (!(eta_dj > 0.0) || eta_dj > 1.0) throw std::domain_error("eta_dj must be in (0, 1]");
  if (!(mu > 0.0)) throw std::domain_error("mu must be positive");
  if (eta_dj == 1.0) return 1.0;
  const double f = 1.0 - 4.0 * std::log(1.0 / eta_dj) / (3.0 * M_PI * mu);
  return std::clamp(f, 0.0, 1.0);
}

double rwtm_efficiency(const TransmissionConfig& cfg) {
  cfg.validate();
  return chain_efficiency(cfg.eta_dj, cfg.n_joints) * tsm_efficiency(cfg.mu_tsm, cfg.theta_tsm);
}

double propagate_tension(double input, HysteresisState& state, const TransmissionConfig& cfg) {
  if (input < 0.0) throw std::domain_error("input tension must be non-negative");
  const double eta = rwtm_efficiency(cfg);
  const double raising = eta * input;       // wire slipping toward the robot
  const double lowering = input / eta;      // wire slipping back toward the motor
  if (state.output < raising - cfg.stiction_band) {
    state.output = raising;
    state.motion = WireMotion::Raising;
  } else if (state.output > lowering + cfg.stiction_band) {
    state.output = lowering;
    state.motion = WireMotion::Lowering;
  } else {
    state.motion = WireMotion::Stuck;
  }
  return state.output;
}

void DesignBudget::validate() const {
  if (m_dec < 0.0 || l_dec < 0.0 || m_tsm < 0.0 || m_tip < 0.0 || mu_tip < 0.0 || mu_rwtm < 0.0) {
    throw std::domain_error("design budget values must be non-negative");
  }
}

double total_mass(int n, double l_total, const DesignBudget& budget) {
  budget.validate();
  if (n < 0) throw std::domain_error("joint count must be non-negative");
  if (l_total < n * budget.l_dec - 1e-12) {
    throw std::domain_error("total length shorter than the joints occupy");
  }
  return (budget.m_dec - budget.m_tsm * budget.l_dec) * n + budget.m_tsm * l_total;
}

TractionCheck traction_feasible(int n, double l_total, const DesignBudget& budget) {
  const double drag = total_mass(n, l_total, budget) * budget.mu_rwtm;
  const double traction = budget.m_tip * budget.mu_tip;
  return {traction >= drag, traction - drag};
}

TsmAngleBudget max_tsm_angle_for_efficiency(int n, double eta_dec, double mu_tsm,
                                            double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0) throw std::domain_error("threshold must be in (0, 1]");
  const double chain = chain_efficiency(eta_dec, n);
  TsmAngleBudget out;
  if (chain < threshold) {
    return out;  // chain alone already below threshold
  }
  out.feasible = true;
  if (mu_tsm < 0.0) throw std::domain_error("mu_tsm must be non-negative");
  if (mu_tsm == 0.0) {
    out.unbounded = true;
    out.angle = std::numeric_limits<double>::infinity();
    return out;
  }
  out.angle = std::max(0.0, (n * std::log(eta_dec) - std::log(threshold)) / mu_tsm);
  return out;
}

}  // namespace rwd
