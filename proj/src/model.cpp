#include "rwdrive/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace rwd {

namespace {

constexpr double kGeomTol = 1e-9;

void check_joint_limits(const JointVector& q, double limit) {
  for (int i = 0; i < 3; ++i) {
    if (!(std::abs(q[i]) <= limit)) {
      throw std::domain_error("joint " + std::to_string(i + 1) + " angle " +
                              std::to_string(q[i]) + " rad exceeds +/-" + std::to_string(limit));
    }
  }
}

}  // namespace

TendonJacobian TendonJacobian::gcd_joints() {
  TendonJacobian G;
  G.entries << 0.028, 0.056, 0.0,
               0.028, -0.056, 0.0,
              -0.028, 0.0, 0.056,
              -0.028, 0.0, -0.056;
  return G;
}

void TendonJacobian::validate() const {
  for (int j = 0; j < 3; ++j) {
    if (std::abs(entries.col(j).sum()) > 1e-12) {
      throw std::domain_error("tendon Jacobian column " + std::to_string(j + 1) +
                              " does not sum to zero");
    }
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 4, 3>> lu(entries);
  if (lu.rank() != 3) {
    throw std::domain_error("tendon Jacobian is rank deficient");
  }
}

WireVector wire_lengths_from_angles(const JointVector& q, const TendonJacobian& G) {
  check_joint_limits(q, kJointLimitRad);
  return G.entries * q;
}

JointVector joint_torques_from_tensions(const WireVector& tensions, const TendonJacobian& G) {
  if (tensions.minCoeff() < 0.0) {
    throw std::domain_error("wire tensions must be non-negative");
  }
  return -G.entries.transpose() * tensions;
}

namespace {

// Candidate tension vectors whose images can be polytope vertices: box
// corners, or (with a total-tension plane) points with three coordinates at
// bounds and the fourth fixed by the sum.
std::vector<WireVector> candidate_tensions(double f_min, double f_max,
                                           std::optional<double> sum_constraint) {
  std::vector<WireVector> out;
  if (!sum_constraint) {
    for (int mask = 0; mask < 16; ++mask) {
      WireVector f;
      for (int i = 0; i < 4; ++i) f[i] = (mask >> i) & 1 ? f_max : f_min;
      out.push_back(f);
    }
    return out;
  }
  const double s = *sum_constraint;
  for (int free = 0; free < 4; ++free) {
    for (int mask = 0; mask < 8; ++mask) {
      WireVector f;
      int bit = 0;
      double fixed_sum = 0.0;
      for (int i = 0; i < 4; ++i) {
        if (i == free) continue;
        f[i] = (mask >> bit) & 1 ? f_max : f_min;
        fixed_sum += f[i];
        ++bit;
      }
      const double v = s - fixed_sum;
      if (v < f_min - kGeomTol || v > f_max + kGeomTol) continue;
      f[free] = std::clamp(v, f_min, f_max);
      out.push_back(f);
    }
  }
  return out;
}

std::vector<Eigen::Vector3d> dedupe(const std::vector<Eigen::Vector3d>& pts) {
  std::vector<Eigen::Vector3d> out;
  for (const auto& p : pts) {
    bool seen = false;
    for (const auto& q : out) {
      if ((p - q).norm() <= kGeomTol) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(p);
  }
  return out;
}

// Orthonormal basis of the affine hull of the points, anchored at pts[0].
std::vector<Eigen::Vector3d> affine_basis(const std::vector<Eigen::Vector3d>& pts) {
  std::vector<Eigen::Vector3d> basis;
  for (size_t i = 1; i < pts.size(); ++i) {
    Eigen::Vector3d v = pts[i] - pts[0];
    for (const auto& b : basis) v -= v.dot(b) * b;
    if (v.norm() > kGeomTol) basis.push_back(v.normalized());
    if (basis.size() == 3) break;
  }
  return basis;
}

// Caratheodory test in the affine hull: p is interior iff it is a convex
// combination of r+1 affinely independent other points (r = affine rank).
bool is_extreme_point(size_t idx, const std::vector<Eigen::VectorXd>& coords) {
  const int r = static_cast<int>(coords[0].size());
  const int m = r + 1;  // subset size
  const Eigen::VectorXd& p = coords[idx];
  std::vector<size_t> others;
  for (size_t i = 0; i < coords.size(); ++i) {
    if (i != idx) others.push_back(i);
  }
  if (others.size() < static_cast<size_t>(m)) return true;

  std::vector<int> pick(m);
  for (int i = 0; i < m; ++i) pick[i] = i;
  while (true) {
    Eigen::MatrixXd A(m, m);
    for (int c = 0; c < m; ++c) {
      A.block(0, c, r, 1) = coords[others[pick[c]]];
      A(r, c) = 1.0;
    }
    Eigen::VectorXd rhs(m);
    rhs.head(r) = p;
    rhs[r] = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.isInvertible()) {
      Eigen::VectorXd lambda = lu.solve(rhs);
      if (lambda.minCoeff() >= -1e-9 && (A * lambda - rhs).norm() <= 1e-9) {
        return false;  // expressible as a convex combination of others
      }
    }
    // next combination
    int i = m - 1;
    while (i >= 0 && pick[i] == static_cast<int>(others.size()) - m + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return true;
}

std::vector<Eigen::Vector3d> extreme_points(std::vector<Eigen::Vector3d> pts) {
  pts = dedupe(pts);
  if (pts.size() <= 1) return pts;
  const auto basis = affine_basis(pts);
  if (basis.empty()) return {pts[0]};

  std::vector<Eigen::VectorXd> coords(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    Eigen::VectorXd c(static_cast<int>(basis.size()));
    for (size_t b = 0; b < basis.size(); ++b) c[static_cast<int>(b)] = (pts[i] - pts[0]).dot(basis[b]);
    coords[i] = c;
  }
  std::vector<Eigen::Vector3d> out;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (is_extreme_point(i, coords)) out.push_back(pts[i]);
  }
  return out;
}

}  // namespace

TorquePolytope torque_polytope(const TendonJacobian& G, double f_min, double f_max,
                               std::optional<double> sum_constraint) {
  if (f_min < 0.0 || f_min > f_max) {
    throw std::domain_error("tension box requires 0 <= f_min <= f_max");
  }
  if (sum_constraint &&
      (*sum_constraint < 4.0 * f_min - kGeomTol || *sum_constraint > 4.0 * f_max + kGeomTol)) {
    throw std::domain_error("sum constraint outside [4 f_min, 4 f_max]");
  }
  std::vector<Eigen::Vector3d> images;
  for (const auto& f : candidate_tensions(f_min, f_max, sum_constraint)) {
    images.push_back(-G.entries.transpose() * f);
  }
  TorquePolytope poly;
  poly.vertices = extreme_points(std::move(images));
  poly.f_min = f_min;
  poly.f_max = f_max;
  poly.sum_constraint = sum_constraint;
  return poly;
}

JointVector max_independent_torque(const TendonJacobian& G, double f_min, double f_max,
                                   std::optional<double> sum_constraint) {
  if (f_min < 0.0 || f_min > f_max) {
    throw std::domain_error("tension box requires 0 <= f_min <= f_max");
  }
  if (sum_constraint &&
      (*sum_constraint < 4.0 * f_min - kGeomTol || *sum_constraint > 4.0 * f_max + kGeomTol)) {
    throw std::domain_error("sum constraint outside [4 f_min, 4 f_max]");
  }

  JointVector best;
  for (int j = 0; j < 3; ++j) {
    // Equalities: tau_i = 0 for i != j, plus the optional sum plane.
    std::vector<Eigen::Vector4d> eq_rows;
    std::vector<double> eq_rhs;
    for (int i = 0; i < 3; ++i) {
      if (i == j) continue;
      eq_rows.push_back(-G.entries.col(i));
      eq_rhs.push_back(0.0);
    }
    if (sum_constraint) {
      eq_rows.push_back(Eigen::Vector4d::Ones());
      eq_rhs.push_back(*sum_constraint);
    }
    const int n_eq = static_cast<int>(eq_rows.size());
    const int n_fixed = 4 - n_eq;
    const Eigen::Vector4d objective = -G.entries.col(j);

    bool found = false;
    double best_obj = -std::numeric_limits<double>::infinity();

    // Choose which coordinates sit at a bound; the equalities pin the rest.
    for (int fixed_mask = 0; fixed_mask < 16; ++fixed_mask) {
      if (__builtin_popcount(fixed_mask) != n_fixed) continue;
      for (int bound_mask = 0; bound_mask < (1 << n_fixed); ++bound_mask) {
        Eigen::Vector4d f = Eigen::Vector4d::Zero();
        std::vector<int> free_idx;
        int bit = 0;
        for (int i = 0; i < 4; ++i) {
          if (fixed_mask >> i & 1) {
            f[i] = (bound_mask >> bit & 1) ? f_max : f_min;
            ++bit;
          } else {
            free_idx.push_back(i);
          }
        }
        Eigen::MatrixXd A(n_eq, n_eq);
        Eigen::VectorXd rhs(n_eq);
        for (int r = 0; r < n_eq; ++r) {
          double fixed_part = 0.0;
          for (int i = 0; i < 4; ++i) {
            if (fixed_mask >> i & 1) fixed_part += eq_rows[r][i] * f[i];
          }
          rhs[r] = eq_rhs[r] - fixed_part;
          for (size_t c = 0; c < free_idx.size(); ++c) A(r, static_cast<int>(c)) = eq_rows[r][free_idx[c]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible()) continue;
        Eigen::VectorXd x = lu.solve(rhs);
        bool ok = true;
        for (int c = 0; c < n_eq; ++c) {
          if (x[c] < f_min - kGeomTol || x[c] > f_max + kGeomTol) ok = false;
        }
        if (!ok) continue;
        for (size_t c = 0; c < free_idx.size(); ++c) {
          f[free_idx[c]] = std::clamp(x[static_cast<int>(c)], f_min, f_max);
        }
        found = true;
        best_obj = std::max(best_obj, objective.dot(f));
      }
    }
    if (!found) {
      throw std::domain_error("independent-torque program infeasible for joint " +
                              std::to_string(j + 1));
    }
    best[j] = best_obj;
  }
  return best;
}

void KinematicChain::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (i == prismatic_link) continue;
    if (link_lengths[static_cast<size_t>(i)] <= 0.0) {
      throw std::domain_error("link " + std::to_string(i + 1) + " length must be positive");
    }
  }
  if (prismatic_link < 0 || prismatic_link > 2) {
    throw std::domain_error("prismatic link index out of range");
  }
  if (!(prismatic_min > 0.0) || prismatic_min > prismatic_max) {
    throw std::domain_error("prismatic bounds invalid");
  }
  if (joint_limit <= 0.0) throw std::domain_error("joint limit must be positive");
}

void Pose::validate() const {
  if (std::abs(orientation.norm() - 1.0) > 1e-9) {
    throw std::domain_error("pose orientation is not a unit quaternion");
  }
}

namespace {

Eigen::Quaterniond axis_rotation(JointAxis axis, double angle) {
  const Eigen::Vector3d unit =
      axis == JointAxis::Pitch ? Eigen::Vector3d::UnitY() : Eigen::Vector3d::UnitZ();
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, unit));
}

}  // namespace

Pose forward_kinematics(const JointVector& q, double prismatic, const KinematicChain& chain) {
  chain.validate();
  check_joint_limits(q, chain.joint_limit);
  if (prismatic < chain.prismatic_min - kGeomTol || prismatic > chain.prismatic_max + kGeomTol) {
    throw std::domain_error("prismatic value outside the contract-link bounds");
  }

  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Quaterniond r = Eigen::Quaterniond::Identity();
  for (int i = 0; i < 3; ++i) {
    r = r * axis_rotation(chain.joint_axes[static_cast<size_t>(i)], q[i]);
    const double len =
        i == chain.prismatic_link ? prismatic : chain.link_lengths[static_cast<size_t>(i)];
    p += r * (len * Eigen::Vector3d::UnitX());
  }
  Pose pose;
  pose.position = p;
  pose.orientation = r.normalized();
  return pose;
}

double rotation_angle_between(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  const Eigen::Quaterniond rel = a.conjugate() * b;
  return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
}

namespace {

double pose_cost(const Eigen::Vector4d& x, const Pose& target, const KinematicChain& chain,
                 double w_orient) {
  const Pose pose = forward_kinematics(JointVector(x[0], x[1], x[2]), x[3], chain);
  const double pos_err = (pose.position - target.position).norm();
  const double ang_err = rotation_angle_between(pose.orientation, target.orientation);
  return pos_err + w_orient * ang_err;
}

// Minimizes the cost along x + t*u inside the box. Brackets from t = 0 with
// expanding probes, then golden-section refines. Returns the step taken.
struct LineMin {
  double t = 0.0;
  double cost = 0.0;
};

LineMin line_minimize(const Eigen::Vector4d& x, const Eigen::Vector4d& u, double f0,
                      const Eigen::Vector4d& lo, const Eigen::Vector4d& hi, const Pose& target,
                      const KinematicChain& chain, double w) {
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    if (u[i] > 1e-15) {
      t_lo = std::max(t_lo, (lo[i] - x[i]) / u[i]);
      t_hi = std::min(t_hi, (hi[i] - x[i]) / u[i]);
    } else if (u[i] < -1e-15) {
      t_lo = std::max(t_lo, (hi[i] - x[i]) / u[i]);
      t_hi = std::min(t_hi, (lo[i] - x[i]) / u[i]);
    }
  }
  if (!(t_lo <= 0.0 && t_hi >= 0.0)) return {0.0, f0};

  auto eval = [&](double t) { return pose_cost(x + t * u, target, chain, w); };

  // Expanding probes either way to find a descending direction.
  double best_t = 0.0;
  double best_f = f0;
  for (int sgn : {+1, -1}) {
    double h = 1e-3;
    double prev_f = f0;
    while (h <= 4.0) {
      const double t = std::clamp(sgn * h, t_lo, t_hi);
      const double f = eval(t);
      if (f < best_f) {
        best_f = f;
        best_t = t;
      }
      if (f > prev_f) break;
      prev_f = f;
      if (t == t_lo || t == t_hi) break;
      h *= 2.0;
    }
  }

  // Golden-section refine around the best probe.
  const double radius = std::max(std::abs(best_t), 1e-3);
  double a = std::clamp(best_t - radius, t_lo, t_hi);
  double b = std::clamp(best_t + radius, t_lo, t_hi);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = eval(c), fd = eval(d);
  while (b - a > 1e-12) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = eval(d);
    }
  }
  const double t_ref = fc < fd ? c : d;
  const double f_ref = std::min(fc, fd);
  if (f_ref < best_f) {
    best_f = f_ref;
    best_t = t_ref;
  }
  if (best_f >= f0) return {0.0, f0};
  return {best_t, best_f};
}

}  // namespace

namespace {

struct SearchResult {
  Eigen::Vector4d x;
  double cost;
  int cycles;
};

// One Powell descent: line-minimize along each member of a direction set,
// then along the net displacement, replacing the direction that produced the
// largest single drop. When a cycle stops improving, polls random directions
// with a shrinking radius before giving up; the cost is a sum of norms whose
// kink surfaces leave only narrow descent cones.
SearchResult powell_descend(Eigen::Vector4d x, const Pose& target, const KinematicChain& chain,
                            const IkOptions& opts, const Eigen::Vector4d& lo,
                            const Eigen::Vector4d& hi, std::mt19937& poll_rng) {
  const double w = opts.orientation_weight;
  double cost = pose_cost(x, target, chain, w);

  std::array<Eigen::Vector4d, 4> dirs;
  auto reset_dirs = [&] {
    for (int i = 0; i < 4; ++i) dirs[static_cast<size_t>(i)] = Eigen::Vector4d::Unit(i);
  };
  reset_dirs();

  auto clamped_cost = [&](const Eigen::Vector4d& y) {
    for (int i = 0; i < 4; ++i) {
      if (y[i] < lo[i] || y[i] > hi[i]) return std::numeric_limits<double>::infinity();
    }
    return pose_cost(y, target, chain, w);
  };
  auto poll_direction = [&](int index) {
    Eigen::Vector4d d;
    if (index < 8) {
      d = Eigen::Vector4d::Unit(index / 2) * (index % 2 == 0 ? 1.0 : -1.0);
    } else {
      for (int i = 0; i < 4; ++i) {
        d[i] = static_cast<double>(poll_rng()) / 4294967296.0 - 0.5;
      }
      if (d.norm() < 1e-9) d = Eigen::Vector4d::Unit(0);
      d.normalize();
    }
    return d;
  };

  int cycle = 0;
  double poll_radius = 1e-2;
  for (; cycle < opts.max_cycles; ++cycle) {
    if (cycle % 8 == 7) reset_dirs();
    const Eigen::Vector4d x0 = x;
    const double f0 = cost;
    double biggest_drop = 0.0;
    int drop_idx = -1;
    for (int k = 0; k < 4; ++k) {
      const LineMin lm = line_minimize(x, dirs[static_cast<size_t>(k)], cost, lo, hi, target,
                                       chain, w);
      if (cost - lm.cost > biggest_drop) {
        biggest_drop = cost - lm.cost;
        drop_idx = k;
      }
      x += lm.t * dirs[static_cast<size_t>(k)];
      cost = lm.cost;
    }
    Eigen::Vector4d net = x - x0;
    if (net.norm() > 1e-14 && drop_idx >= 0) {
      net.normalize();
      const LineMin lm = line_minimize(x, net, cost, lo, hi, target, chain, w);
      x += lm.t * net;
      cost = lm.cost;
      dirs[static_cast<size_t>(drop_idx)] = net;
    }
    if (f0 - cost < opts.cost_tol) {
      bool escaped = false;
      while (poll_radius >= 1e-9 && !escaped) {
        for (int k = 0; k < 1500 && !escaped; ++k) {
          const Eigen::Vector4d d = poll_direction(k);
          const double fy = clamped_cost(x + poll_radius * d);
          if (fy < cost) {
            const LineMin lm = line_minimize(x, d, cost, lo, hi, target, chain, w);
            if (lm.cost < cost) {
              x += lm.t * d;
              cost = lm.cost;
            } else {
              x += poll_radius * d;
              cost = fy;
            }
            escaped = true;
          }
        }
        if (!escaped) poll_radius *= 0.25;
      }
      if (!escaped) {
        ++cycle;
        break;
      }
      reset_dirs();
    }
  }
  return {x, cost, cycle};
}

}  // namespace

IkResult solve_ik(const Pose& target, const JointVector& warm_q, double warm_prismatic,
                  const KinematicChain& chain, const IkOptions& opts) {
  chain.validate();
  target.validate();

  const Eigen::Vector4d lo(-chain.joint_limit, -chain.joint_limit, -chain.joint_limit,
                           chain.prismatic_min);
  const Eigen::Vector4d hi(chain.joint_limit, chain.joint_limit, chain.joint_limit,
                           chain.prismatic_max);
  Eigen::Vector4d x0(warm_q[0], warm_q[1], warm_q[2], warm_prismatic);
  for (int i = 0; i < 4; ++i) x0[i] = std::clamp(x0[i], lo[i], hi[i]);

  std::mt19937 rng(0x5eed);
  SearchResult best = powell_descend(x0, target, chain, opts, lo, hi, rng);
  int cycles = best.cycles;

  // The landscape is nonconvex; a trapped search is retried from perturbed
  // seeds around the best iterate, keeping the best outcome.
  for (int r = 0; r < opts.max_restarts && best.cost > opts.converged_residual; ++r) {
    Eigen::Vector4d seed = best.x;
    const double radius = 0.01 + 0.01 * r;
    for (int i = 0; i < 4; ++i) {
      const double u = static_cast<double>(rng()) / 4294967296.0 - 0.5;
      seed[i] = std::clamp(seed[i] + 2.0 * radius * u, lo[i], hi[i]);
    }
    const SearchResult attempt = powell_descend(seed, target, chain, opts, lo, hi, rng);
    cycles += attempt.cycles;
    if (attempt.cost < best.cost) best = attempt;
  }

  IkResult res;
  res.q = JointVector(best.x[0], best.x[1], best.x[2]);
  res.prismatic = best.x[3];
  res.residual = best.cost;
  res.cycles = cycles;
  res.converged = best.cost <= opts.converged_residual;
  return res;
}

}  // namespace rwd
