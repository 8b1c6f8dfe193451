#pragma once

#include "rwdrive/config.hpp"
#include "rwdrive/metrics.hpp"
#include "rwdrive/transmission.hpp"
#include "rwdrive/types.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace rwd {

// Process exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

// simulate: runs the configured scenario, writes log.csv and report.txt.
int cmd_simulate(const std::filesystem::path& config_path,
                 const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed_override, bool quiet);

struct EfficiencyParams {
  std::vector<double> mu_grid{0.04, 0.06, 0.08, 0.1, 0.12, 0.14, 0.16, 0.18, 0.2};
  std::vector<double> eta_grid{0.98, 0.985, 0.99};
  int n_min = 1;
  int n_max = 8;
  double alpha_max = 4.0 * M_PI;
  int alpha_samples = 65;
};

// efficiency: sheath efficiency curves, joint-chain levels and the
// decoupled-superiority fractions, as one CSV (efficiency.csv).
int cmd_efficiency(const EfficiencyParams& params, const std::filesystem::path& out_dir,
                   bool quiet);

struct DesignParams {
  DesignBudget budget;
  double eta_dec = 0.97;
  double mu_tsm = 0.085;
  double threshold = 0.6;
  int n_min = 0;
  int n_max = 8;
  std::vector<double> theta_grid{0.0, M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0, 2.0 * M_PI};
  std::vector<double> length_grid{1.0, 2.0, 4.0, 8.0, 16.0};
};

// design: mass/traction/efficiency feasibility sweep (design.csv).
int cmd_design(const DesignParams& params, const std::filesystem::path& out_dir, bool quiet);

struct PolytopeParams {
  double f_min = 10.0;
  double f_max = 500.0;
  std::optional<double> sum_constraint = 340.0;
  std::optional<double> motor_torque_cap;  // N*m at the winch
  double r_pulley = 0.0095;
};

// polytope: torque polytope vertices and independent-torque maxima under
// each candidate constraint set (polytope.csv).
int cmd_polytope(const PolytopeParams& params, const std::filesystem::path& out_dir, bool quiet);

// metrics: recomputes the evaluation report from a stored log. The chain
// used for the end-effector errors comes from the optional config.
int cmd_metrics(const std::filesystem::path& log_path,
                const std::optional<std::filesystem::path>& config_path,
                const std::filesystem::path& out_dir, bool quiet);

}  // namespace rwd
