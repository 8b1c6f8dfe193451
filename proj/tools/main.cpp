#include "rwdrive/cli.hpp"

#include <CLI11.hpp>

#include <optional>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"rwdrive - remote wire drive simulation and analysis toolkit"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  bool quiet = false;
  app.add_option("--out-dir", out_dir, "directory for output files")->capture_default_str();
  app.add_flag("--quiet", quiet, "suppress progress output");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run a scenario config against the plant");
  std::string sim_config;
  std::optional<std::uint64_t> seed;
  simulate->add_option("--config", sim_config, "run config file")->required();
  simulate->add_option("--seed", seed, "override the scenario seed");

  // efficiency
  auto* efficiency = app.add_subcommand("efficiency", "sheath/joint-chain efficiency tables");
  rwd::EfficiencyParams eff;
  efficiency->add_option("--mu", eff.mu_grid, "sheath friction coefficients");
  efficiency->add_option("--eta", eff.eta_grid, "per-joint efficiencies");
  efficiency->add_option("--n-max", eff.n_max, "largest joint count");
  efficiency->add_option("--alpha-max", eff.alpha_max, "largest bend angle [rad]");
  efficiency->add_option("--alpha-samples", eff.alpha_samples, "samples per sheath curve");

  // design
  auto* design = app.add_subcommand("design", "mass/traction/efficiency feasibility sweep");
  rwd::DesignParams des;
  design->add_option("--n-max", des.n_max, "largest joint count");
  design->add_option("--theta", des.theta_grid, "sheath bend grid [rad]");
  design->add_option("--length", des.length_grid, "total length grid [m]");
  design->add_option("--threshold", des.threshold, "efficiency threshold");
  design->add_option("--eta-dec", des.eta_dec, "per-joint efficiency");
  design->add_option("--mu-tsm", des.mu_tsm, "sheath friction coefficient");
  design->add_option("--m-dec", des.budget.m_dec, "joint mass [kg]");
  design->add_option("--l-dec", des.budget.l_dec, "joint length [m]");
  design->add_option("--m-tsm", des.budget.m_tsm, "sheath mass per length [kg/m]");
  design->add_option("--m-tip", des.budget.m_tip, "distal robot mass [kg]");
  design->add_option("--mu-tip", des.budget.mu_tip, "distal traction coefficient");
  design->add_option("--mu-rwtm", des.budget.mu_rwtm, "transmission drag coefficient");

  // polytope
  auto* polytope = app.add_subcommand("polytope", "torque polytope and per-joint maxima");
  rwd::PolytopeParams poly;
  bool no_sum = false;
  std::optional<double> cap;
  polytope->add_option("--f-min", poly.f_min, "minimum wire tension [N]");
  polytope->add_option("--f-max", poly.f_max, "maximum wire tension [N]");
  polytope->add_option("--sum", poly.sum_constraint, "total-tension constraint [N]");
  polytope->add_flag("--no-sum", no_sum, "drop the total-tension variant");
  polytope->add_option("--motor-cap", cap, "motor torque cap variant [N*m]");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "recompute the report from a stored log");
  std::string log_path;
  std::optional<std::string> metrics_config;
  metrics->add_option("--log", log_path, "log.csv produced by simulate")->required();
  metrics->add_option("--config", metrics_config, "run config (for the kinematic chain)");

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) {
    return rwd::cmd_simulate(sim_config, out_dir, seed, quiet);
  }
  if (efficiency->parsed()) {
    return rwd::cmd_efficiency(eff, out_dir, quiet);
  }
  if (design->parsed()) {
    return rwd::cmd_design(des, out_dir, quiet);
  }
  if (polytope->parsed()) {
    if (no_sum) poly.sum_constraint.reset();
    poly.motor_torque_cap = cap;
    return rwd::cmd_polytope(poly, out_dir, quiet);
  }
  if (metrics->parsed()) {
    std::optional<std::filesystem::path> cfg;
    if (metrics_config) cfg = *metrics_config;
    return rwd::cmd_metrics(log_path, cfg, out_dir, quiet);
  }
  return rwd::kExitConfigError;
}
