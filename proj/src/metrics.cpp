#include "rwdrive/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace rwd {

namespace {

struct Overlap {
  size_t n = 0;
  bool valid = false;
  double ncc = 0.0;
};

Overlap ncc_at(const TimeSeries& y, const TimeSeries& z, int d) {
  Overlap o;
  if (d < 0 || static_cast<size_t>(d) >= z.size()) return o;
  o.n = std::min(y.size(), z.size() - static_cast<size_t>(d));
  if (o.n < 2) return o;
  double my = 0.0, mz = 0.0;
  for (size_t i = 0; i < o.n; ++i) {
    my += y.values[i];
    mz += z.values[i + static_cast<size_t>(d)];
  }
  my /= static_cast<double>(o.n);
  mz /= static_cast<double>(o.n);
  double syy = 0.0, szz = 0.0, syz = 0.0;
  for (size_t i = 0; i < o.n; ++i) {
    const double a = y.values[i] - my;
    const double b = z.values[i + static_cast<size_t>(d)] - mz;
    syy += a * a;
    szz += b * b;
    syz += a * b;
  }
  if (syy <= 0.0 || szz <= 0.0) return o;
  o.valid = true;
  o.ncc = syz / std::sqrt(syy * szz);
  return o;
}

}  // namespace

NccResult ncc_with_delay(const TimeSeries& y, const TimeSeries& z, int max_delay) {
  if (max_delay < 0) throw std::domain_error("max_delay must be non-negative");
  NccResult best;
  bool found = false;
  for (int d = 0; d <= max_delay; ++d) {
    const Overlap o = ncc_at(y, z, d);
    if (!o.valid) continue;
    if (!found || o.ncc > best.ncc) {
      best.ncc = o.ncc;
      best.delay = d;
      found = true;
    }
  }
  if (!found) {
    throw CorrelationError(
        "correlation undefined: no delay gives an overlap of two or more samples "
        "with nonzero variance");
  }
  return best;
}

double mse(const TimeSeries& y, const TimeSeries& z, int delay) {
  if (delay < 0) throw std::domain_error("delay must be non-negative");
  if (static_cast<size_t>(delay) >= z.size()) {
    throw std::domain_error("empty overlap: delay exceeds the series length");
  }
  const size_t n = std::min(y.size(), z.size() - static_cast<size_t>(delay));
  if (n < 1) throw std::domain_error("empty overlap");
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double e = y.values[i] - z.values[i + static_cast<size_t>(delay)];
    acc += e * e;
  }
  return acc / static_cast<double>(n);
}

LoopEfficiency efficiency_from_loop(const TimeSeries& input, const TimeSeries& output,
                                    double tension_floor, double noise_tol) {
  if (input.size() != output.size()) {
    throw std::domain_error("input and output series must have the same length");
  }
  if (input.size() < 2) throw std::domain_error("need at least two samples");

  // Longest run where the input never drops by more than noise_tol.
  size_t best_begin = 0, best_end = 0;
  size_t begin = 0;
  for (size_t i = 1; i <= input.size(); ++i) {
    const bool breaks = i == input.size() ||
                        input.values[i] < input.values[i - 1] - noise_tol;
    if (breaks) {
      if (i - begin > best_end - best_begin) {
        best_begin = begin;
        best_end = i;
      }
      begin = i;
    }
  }
  const bool rising = best_end > best_begin &&
                      input.values[best_end - 1] - input.values[best_begin] > noise_tol;
  if (!rising) throw std::domain_error("no rising phase detected in the input series");

  std::vector<double> ratios;
  for (size_t i = best_begin; i < best_end; ++i) {
    if (input.values[i] < tension_floor) continue;
    ratios.push_back(output.values[i] / input.values[i]);
  }
  if (ratios.empty()) throw std::domain_error("rising phase entirely below the tension floor");
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double var = 0.0;
  for (double r : ratios) var += (r - mean) * (r - mean);
  var /= static_cast<double>(ratios.size());
  return {mean, std::sqrt(var)};
}

PoseError ee_pose_error(const Pose& target, const Pose& actual) {
  target.validate();
  actual.validate();
  PoseError err;
  err.position = (target.position - actual.position).norm();
  err.orientation = rotation_angle_between(target.orientation, actual.orientation);
  return err;
}

namespace {

TimeSeries column(const SimulationLog& log, const std::array<double, 3> LogRow::* member,
                  int joint) {
  TimeSeries s;
  s.t0 = log.rows.empty() ? 0.0 : log.rows.front().t;
  s.dt = log.dt;
  s.values.reserve(log.rows.size());
  for (const auto& r : log.rows) s.values.push_back((r.*member)[static_cast<size_t>(joint)]);
  return s;
}

PairingScore score_pairing(const SimulationLog& log,
                           const std::array<double, 3> LogRow::* ref,
                           const std::array<double, 3> LogRow::* lag, int max_delay) {
  PairingScore score;
  for (int j = 0; j < 3; ++j) {
    const TimeSeries y = column(log, ref, j);
    const TimeSeries z = column(log, lag, j);
    const NccResult r = ncc_with_delay(y, z, max_delay);
    score.ncc[static_cast<size_t>(j)] = r.ncc;
    score.delay[static_cast<size_t>(j)] = r.delay;
    score.mse[static_cast<size_t>(j)] = mse(y, z, r.delay);
  }
  score.ncc_mean = (score.ncc[0] + score.ncc[1] + score.ncc[2]) / 3.0;
  score.mse_mean = (score.mse[0] + score.mse[1] + score.mse[2]) / 3.0;
  return score;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_pairing(std::ostream& out, const char* name, const PairingScore& s) {
  for (int j = 0; j < 3; ++j) {
    out << name << "_ncc_joint" << j + 1 << ' ' << fmt(s.ncc[static_cast<size_t>(j)]) << "\n";
  }
  out << name << "_ncc_mean " << fmt(s.ncc_mean) << "\n";
  for (int j = 0; j < 3; ++j) {
    out << name << "_delay_joint" << j + 1 << ' ' << s.delay[static_cast<size_t>(j)] << "\n";
  }
  for (int j = 0; j < 3; ++j) {
    out << name << "_mse_joint" << j + 1 << ' ' << fmt(s.mse[static_cast<size_t>(j)]) << "\n";
  }
  out << name << "_mse_mean " << fmt(s.mse_mean) << "\n";
}

}  // namespace

void EvaluationReport::write(std::ostream& out) const {
  out << "# evaluation report\n";
  write_pairing(out, "follower", follower);
  write_pairing(out, "estimator", estimator);
  write_pairing(out, "integrated", integrated);
  out << "ee_position_error_mean " << fmt(ee_position_error) << "\n";
  out << "ee_orientation_error_mean " << fmt(ee_orientation_error) << "\n";
}

EvaluationReport evaluate_run(const SimulationLog& log, const KinematicChain& chain,
                              int max_delay) {
  if (log.rows.size() < 2) {
    throw LogSchemaError("evaluation needs at least two logged ticks");
  }
  const int d = std::min<int>(max_delay, static_cast<int>(log.rows.size()) - 2);

  EvaluationReport report;
  report.follower = score_pairing(log, &LogRow::q_ref, &LogRow::q_hat, d);
  report.estimator = score_pairing(log, &LogRow::q_plant, &LogRow::q_hat, d);
  report.integrated = score_pairing(log, &LogRow::q_ref, &LogRow::q_plant, d);

  double pos_acc = 0.0, ang_acc = 0.0;
  for (const auto& r : log.rows) {
    const double prismatic = std::clamp(r.vsc_prox, chain.prismatic_min, chain.prismatic_max);
    auto clamp_q = [&](const std::array<double, 3>& a) {
      JointVector q;
      for (int i = 0; i < 3; ++i) {
        q[i] = std::clamp(a[static_cast<size_t>(i)], -chain.joint_limit, chain.joint_limit);
      }
      return q;
    };
    const Pose target = forward_kinematics(clamp_q(r.q_ref), prismatic, chain);
    const Pose actual = forward_kinematics(clamp_q(r.q_plant), prismatic, chain);
    const PoseError e = ee_pose_error(target, actual);
    pos_acc += e.position;
    ang_acc += e.orientation;
  }
  report.ee_position_error = pos_acc / static_cast<double>(log.rows.size());
  report.ee_orientation_error = ang_acc / static_cast<double>(log.rows.size());
  return report;
}

}  // namespace rwd
