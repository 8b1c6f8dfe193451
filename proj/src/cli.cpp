#include "rwdrive/cli.hpp"

#include "rwdrive/model.hpp"
#include "rwdrive/sequencer.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>

namespace rwd {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& out_dir, const char* name) {
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

int guarded(bool quiet, const char* what, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << what << ": config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const LogSchemaError& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return kExitRuntimeError;
  }
  (void)quiet;
}

}  // namespace

int cmd_simulate(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                 std::optional<std::uint64_t> seed_override, bool quiet) {
  return guarded(quiet, "simulate", [&] {
    RunConfig cfg = load_run_config(config_path);
    if (seed_override) cfg.scenario.seed = *seed_override;

    const SimulationLog log = run_scenario(cfg.scenario, cfg.sim);
    {
      auto out = open_out(out_dir, "log.csv");
      log.write_csv(out);
    }
    {
      auto out = open_out(out_dir, "report.txt");
      if (log.rows.size() >= 2) {
        evaluate_run(log, cfg.sim.chain).write(out);
      } else {
        out << "# evaluation report\n# run too short to evaluate\n";
      }
    }
    if (!quiet) {
      std::cout << "simulate: " << log.rows.size() << " ticks -> " << (out_dir / "log.csv").string()
                << ", " << (out_dir / "report.txt").string() << "\n";
    }
  });
}

int cmd_efficiency(const EfficiencyParams& params, const std::filesystem::path& out_dir,
                   bool quiet) {
  return guarded(quiet, "efficiency", [&] {
    auto out = open_out(out_dir, "efficiency.csv");
    out << "kind,mu,eta_dj,n,alpha,efficiency,superiority_fraction\n";

    for (double mu : params.mu_grid) {
      for (int i = 0; i < params.alpha_samples; ++i) {
        const double alpha = params.alpha_max * i / (params.alpha_samples - 1);
        out << "tsm," << fmt(mu) << ",,," << fmt(alpha) << ',' << fmt(tsm_efficiency(mu, alpha))
            << ",\n";
      }
    }
    for (double eta : params.eta_grid) {
      for (int n = params.n_min; n <= params.n_max; ++n) {
        // A chain of n joints covers bends up to n * 3pi/4 at constant efficiency.
        out << "chain,," << fmt(eta) << ',' << n << ',' << fmt(n * kDecoupledBendLimit) << ','
            << fmt(chain_efficiency(eta, n)) << ",\n";
      }
    }
    for (double eta : params.eta_grid) {
      for (double mu : params.mu_grid) {
        out << "fraction," << fmt(mu) << ',' << fmt(eta) << ",,,," << fmt(superiority_fraction(eta, mu))
            << "\n";
      }
    }
    if (!quiet) std::cout << "efficiency: wrote " << (out_dir / "efficiency.csv").string() << "\n";
  });
}

int cmd_design(const DesignParams& params, const std::filesystem::path& out_dir, bool quiet) {
  return guarded(quiet, "design", [&] {
    auto out = open_out(out_dir, "design.csv");
    out << "n,theta_tsm,l_total,mass,traction_ok,traction_margin,efficiency,"
           "meets_threshold,theta_max_at_threshold\n";

    for (int n = params.n_min; n <= params.n_max; ++n) {
      const TsmAngleBudget angle_budget =
          max_tsm_angle_for_efficiency(n, params.eta_dec, params.mu_tsm, params.threshold);
      const std::string theta_max = angle_budget.unbounded ? "inf" : fmt(angle_budget.angle);
      for (double theta : params.theta_grid) {
        TransmissionConfig t;
        t.n_joints = n;
        t.eta_dj = params.eta_dec;
        t.mu_tsm = params.mu_tsm;
        t.theta_tsm = theta;
        const double eff = rwtm_efficiency(t);
        for (double l : params.length_grid) {
          if (l < n * params.budget.l_dec) continue;  // joints would not fit
          const double mass = total_mass(n, l, params.budget);
          const TractionCheck traction = traction_feasible(n, l, params.budget);
          out << n << ',' << fmt(theta) << ',' << fmt(l) << ',' << fmt(mass) << ','
              << (traction.feasible ? 1 : 0) << ',' << fmt(traction.margin) << ',' << fmt(eff)
              << ',' << (eff >= params.threshold ? 1 : 0) << ',' << theta_max << "\n";
        }
      }
    }
    if (!quiet) std::cout << "design: wrote " << (out_dir / "design.csv").string() << "\n";
  });
}

int cmd_polytope(const PolytopeParams& params, const std::filesystem::path& out_dir, bool quiet) {
  return guarded(quiet, "polytope", [&] {
    const TendonJacobian G = TendonJacobian::gcd_joints();
    auto out = open_out(out_dir, "polytope.csv");
    out << "kind,constraints,joint,tau1,tau2,tau3\n";

    struct Variant {
      std::string name;
      double f_max;
      std::optional<double> sum;
    };
    std::vector<Variant> variants;
    variants.push_back({"box", params.f_max, std::nullopt});
    if (params.sum_constraint) variants.push_back({"box+sum", params.f_max, params.sum_constraint});
    if (params.motor_torque_cap) {
      const double cap = std::min(params.f_max, *params.motor_torque_cap / params.r_pulley);
      variants.push_back({"box+cap", cap, std::nullopt});
      if (params.sum_constraint) variants.push_back({"box+sum+cap", cap, params.sum_constraint});
    }

    for (const auto& v : variants) {
      const TorquePolytope poly = torque_polytope(G, params.f_min, v.f_max, v.sum);
      for (const auto& vert : poly.vertices) {
        out << "vertex," << v.name << ",," << fmt(vert[0]) << ',' << fmt(vert[1]) << ','
            << fmt(vert[2]) << "\n";
      }
      const JointVector maxima = max_independent_torque(G, params.f_min, v.f_max, v.sum);
      for (int j = 0; j < 3; ++j) {
        out << "max_independent," << v.name << ',' << j + 1 << ',' << fmt(maxima[j]) << ",,\n";
      }
    }
    if (!quiet) std::cout << "polytope: wrote " << (out_dir / "polytope.csv").string() << "\n";
  });
}

int cmd_metrics(const std::filesystem::path& log_path,
                const std::optional<std::filesystem::path>& config_path,
                const std::filesystem::path& out_dir, bool quiet) {
  return guarded(quiet, "metrics", [&] {
    KinematicChain chain;
    if (config_path) chain = load_run_config(*config_path).sim.chain;

    std::ifstream in(log_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open log file: " + log_path.string());
    const SimulationLog log = SimulationLog::read_csv(in);

    const EvaluationReport report = evaluate_run(log, chain);
    auto out = open_out(out_dir, "report.txt");
    report.write(out);
    if (!quiet) std::cout << "metrics: wrote " << (out_dir / "report.txt").string() << "\n";
  });
}

}  // namespace rwd
