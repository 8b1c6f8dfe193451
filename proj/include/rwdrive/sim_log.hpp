#pragma once

#include "rwdrive/types.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rwd {

// One tick of a simulation run. Integer codes: mode 0=initialization,
// 1=expansion, 2=joint control; phase -1=idle, 0..4 = peristalsis phases in
// order; agi_state 0=fully open locked, 1=partial, 2=closed.
struct LogRow {
  double t = 0.0;
  int mode = 0;
  int phase = -1;
  std::array<double, 3> q_ref{};
  std::array<double, 3> q_hat{};
  std::array<double, 3> q_plant{};
  std::array<double, 4> f_motor{};
  std::array<double, 4> f_plant{};
  std::array<double, 4> theta_motor{};
  double vsc_prox = 0.0;
  double vsc_dist = 0.0;
  int agi_state = 0;
  double displacement = 0.0;
};

struct SimulationLog {
  std::uint64_t seed = 0;
  double dt = 0.0;
  std::vector<LogRow> rows;

  // Fixed column order; floating point serialized with 17 significant digits.
  void write_csv(std::ostream& out) const;
  static SimulationLog read_csv(std::istream& in);

  static const std::string& csv_header();
};

}  // namespace rwd
