#include "rwdrive/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace rwd {

namespace {

struct Line {
  int number;
  std::string key;
  std::vector<std::string> args;
};

double to_double(const Line& ln, const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError(ln.number, "field '" + ln.key + "': not a number: '" + s + "'");
  }
  return v;
}

int to_int(const Line& ln, const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError(ln.number, "field '" + ln.key + "': not an integer: '" + s + "'");
  }
  return static_cast<int>(v);
}

bool to_bool(const Line& ln, const std::string& s) {
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  throw ConfigError(ln.number, "field '" + ln.key + "': expected a boolean, got '" + s + "'");
}

void need_args(const Line& ln, size_t n) {
  if (ln.args.size() != n) {
    throw ConfigError(ln.number, "key '" + ln.key + "' expects " + std::to_string(n) +
                                     " value(s), got " + std::to_string(ln.args.size()));
  }
}

JointVector joint_values(const Line& ln) {
  if (ln.args.size() == 1) {
    const double v = to_double(ln, ln.args[0]);
    return JointVector(v, v, v);
  }
  need_args(ln, 3);
  return JointVector(to_double(ln, ln.args[0]), to_double(ln, ln.args[1]),
                     to_double(ln, ln.args[2]));
}

JointAxis to_axis(const Line& ln, const std::string& s) {
  if (s == "pitch") return JointAxis::Pitch;
  if (s == "yaw") return JointAxis::Yaw;
  throw ConfigError(ln.number, "field '" + ln.key + "': unknown axis '" + s +
                                   "' (expected pitch or yaw)");
}

void parse_chain(const Line& ln, KinematicChain& chain) {
  if (ln.key == "joint_axes") {
    need_args(ln, 3);
    for (int i = 0; i < 3; ++i) chain.joint_axes[static_cast<size_t>(i)] = to_axis(ln, ln.args[static_cast<size_t>(i)]);
  } else if (ln.key == "link_lengths") {
    need_args(ln, 3);
    for (int i = 0; i < 3; ++i) chain.link_lengths[static_cast<size_t>(i)] = to_double(ln, ln.args[static_cast<size_t>(i)]);
  } else if (ln.key == "prismatic_link") {
    need_args(ln, 1);
    chain.prismatic_link = to_int(ln, ln.args[0]) - 1;  // 1-based in the file
  } else if (ln.key == "prismatic_range") {
    need_args(ln, 2);
    chain.prismatic_min = to_double(ln, ln.args[0]);
    chain.prismatic_max = to_double(ln, ln.args[1]);
  } else if (ln.key == "joint_limit") {
    need_args(ln, 1);
    chain.joint_limit = to_double(ln, ln.args[0]);
  } else {
    throw ConfigError(ln.number, "unknown key '" + ln.key + "' in [chain]");
  }
}

void parse_transmission(const Line& ln, TransmissionConfig& t) {
  if (ln.key == "identity") {
    need_args(ln, 1);
    if (to_bool(ln, ln.args[0])) t = TransmissionConfig::identity();
  } else if (ln.key == "n_joints") {
    need_args(ln, 1);
    t.n_joints = to_int(ln, ln.args[0]);
  } else if (ln.key == "eta_dj") {
    need_args(ln, 1);
    t.eta_dj = to_double(ln, ln.args[0]);
  } else if (ln.key == "mu_tsm") {
    need_args(ln, 1);
    t.mu_tsm = to_double(ln, ln.args[0]);
  } else if (ln.key == "theta_tsm") {
    need_args(ln, 1);
    t.theta_tsm = to_double(ln, ln.args[0]);
  } else if (ln.key == "stiction_band") {
    need_args(ln, 1);
    t.stiction_band = to_double(ln, ln.args[0]);
  } else if (ln.key == "joint_bends") {
    t.joint_bends.clear();
    for (const auto& a : ln.args) t.joint_bends.push_back(to_double(ln, a));
  } else {
    throw ConfigError(ln.number, "unknown key '" + ln.key + "' in [transmission]");
  }
}

void parse_controller(const Line& ln, SimConfig& sim) {
  auto& a = sim.actuation;
  auto& g = sim.gains;
  if (ln.key == "kp") g.kp = joint_values(ln);
  else if (ln.key == "ki") g.ki = joint_values(ln);
  else if (ln.key == "kd") g.kd = joint_values(ln);
  else if (ln.key == "integral_clamp") { need_args(ln, 1); g.integral_clamp = to_double(ln, ln.args[0]); }
  else if (ln.key == "r_pulley") { need_args(ln, 1); a.r_pulley = to_double(ln, ln.args[0]); }
  else if (ln.key == "elongation_k") { need_args(ln, 1); a.elongation_k = to_double(ln, ln.args[0]); }
  else if (ln.key == "f_min") { need_args(ln, 1); a.f_min = to_double(ln, ln.args[0]); }
  else if (ln.key == "f_max") { need_args(ln, 1); a.f_max = to_double(ln, ln.args[0]); }
  else if (ln.key == "f_contract") { need_args(ln, 1); a.f_contract = to_double(ln, ln.args[0]); }
  else if (ln.key == "agi_close_tension") { need_args(ln, 1); a.agi_close_tension = to_double(ln, ln.args[0]); }
  else if (ln.key == "distal_vsc_tension") { need_args(ln, 1); a.distal_vsc_tension = to_double(ln, ln.args[0]); }
  else if (ln.key == "torque_quantum") { need_args(ln, 1); a.torque_quantum = to_double(ln, ln.args[0]); }
  else if (ln.key == "init_tension") { need_args(ln, 1); a.init_tension = to_double(ln, ln.args[0]); }
  else if (ln.key == "discretize") { need_args(ln, 1); sim.discretize_torque = to_bool(ln, ln.args[0]); }
  else if (ln.key == "feedback") {
    need_args(ln, 1);
    if (ln.args[0] == "motor") sim.feedback = TensionFeedback::MotorSide;
    else if (ln.args[0] == "distal") sim.feedback = TensionFeedback::DistalSide;
    else throw ConfigError(ln.number, "field 'feedback': expected motor or distal");
  } else {
    throw ConfigError(ln.number, "unknown key '" + ln.key + "' in [controller]");
  }
}

void parse_plant(const Line& ln, PlantParams& p) {
  if (ln.key == "damping") p.damping = joint_values(ln);
  else if (ln.key == "inertia") p.inertia = joint_values(ln);
  else if (ln.key == "joint_limit") { need_args(ln, 1); p.joint_limit = to_double(ln, ln.args[0]); }
  else if (ln.key == "vsc_range") {
    need_args(ln, 2);
    p.vsc_min = to_double(ln, ln.args[0]);
    p.vsc_max = to_double(ln, ln.args[1]);
  }
  else if (ln.key == "vsc_spring_max") { need_args(ln, 1); p.vsc_spring_max = to_double(ln, ln.args[0]); }
  else if (ln.key == "vsc_speed") { need_args(ln, 1); p.vsc_speed = to_double(ln, ln.args[0]); }
  else if (ln.key == "agi_spring_max") { need_args(ln, 1); p.agi_spring_max = to_double(ln, ln.args[0]); }
  else if (ln.key == "agi_close_threshold") { need_args(ln, 1); p.agi_close_threshold = to_double(ln, ln.args[0]); }
  else if (ln.key == "agi_torque_bounds") {
    need_args(ln, 2);
    p.agi_torque_min = to_double(ln, ln.args[0]);
    p.agi_torque_max = to_double(ln, ln.args[1]);
  }
  else if (ln.key == "agi_moment_arm") { need_args(ln, 1); p.agi_moment_arm = to_double(ln, ln.args[0]); }
  else if (ln.key == "agi_damping") { need_args(ln, 1); p.agi_damping = to_double(ln, ln.args[0]); }
  else if (ln.key == "agi_closed_angle") { need_args(ln, 1); p.agi_closed_angle = to_double(ln, ln.args[0]); }
  else if (ln.key == "slip") { need_args(ln, 1); p.slip = to_double(ln, ln.args[0]); }
  else throw ConfigError(ln.number, "unknown key '" + ln.key + "' in [plant]");
}

void parse_scenario(const Line& ln, Scenario& sc) {
  if (ln.key == "dt") {
    need_args(ln, 1);
    sc.dt = to_double(ln, ln.args[0]);
  } else if (ln.key == "seed") {
    need_args(ln, 1);
    sc.seed = static_cast<std::uint64_t>(std::strtoull(ln.args[0].c_str(), nullptr, 10));
  } else if (ln.key == "phase_timeouts") {
    need_args(ln, 5);
    for (int i = 0; i < 5; ++i) sc.phase_timeouts[static_cast<size_t>(i)] = to_double(ln, ln.args[static_cast<size_t>(i)]);
  } else if (ln.key == "step") {
    if (ln.args.empty()) throw ConfigError(ln.number, "'step' needs a step kind");
    const std::string& kind = ln.args[0];
    ScenarioStep step;
    if (kind == "mode") {
      if (ln.args.size() != 2) throw ConfigError(ln.number, "'step mode' expects one mode name");
      step.kind = ScenarioStep::Kind::SetMode;
      if (ln.args[1] == "init_done") step.mode = ModeCommand::InitDone;
      else if (ln.args[1] == "expand") step.mode = ModeCommand::Expand;
      else if (ln.args[1] == "joint_control") step.mode = ModeCommand::JointControl;
      else throw ConfigError(ln.number, "unknown mode '" + ln.args[1] + "'");
    } else if (kind == "target") {
      if (ln.args.size() != 4) throw ConfigError(ln.number, "'step target' expects three angles");
      step.kind = ScenarioStep::Kind::SetTarget;
      for (int i = 0; i < 3; ++i) step.target[i] = to_double(ln, ln.args[static_cast<size_t>(i) + 1]);
    } else if (kind == "targets_random") {
      if (ln.args.size() != 5) {
        throw ConfigError(ln.number, "'step targets_random' expects count hold lo hi");
      }
      step.kind = ScenarioStep::Kind::RandomTargets;
      step.count = to_int(ln, ln.args[1]);
      step.hold = to_double(ln, ln.args[2]);
      step.lo = to_double(ln, ln.args[3]);
      step.hi = to_double(ln, ln.args[4]);
    } else if (kind == "peristalsis") {
      if (ln.args.size() != 2) throw ConfigError(ln.number, "'step peristalsis' expects a cycle count");
      step.kind = ScenarioStep::Kind::RunPeristalsis;
      step.cycles = to_int(ln, ln.args[1]);
    } else if (kind == "binary") {
      if (ln.args.size() != 3) throw ConfigError(ln.number, "'step binary' expects target and on/off");
      step.kind = ScenarioStep::Kind::SetBinary;
      if (ln.args[1] == "agi_ee") step.binary = BinaryTarget::AgiEndEffector;
      else if (ln.args[1] == "distal_vsc") step.binary = BinaryTarget::DistalVsc;
      else throw ConfigError(ln.number, "unknown binary target '" + ln.args[1] + "'");
      step.engage = to_bool(ln, ln.args[2]);
    } else if (kind == "wait") {
      if (ln.args.size() != 2) throw ConfigError(ln.number, "'step wait' expects a duration");
      step.kind = ScenarioStep::Kind::Wait;
      step.duration = to_double(ln, ln.args[1]);
    } else {
      throw ConfigError(ln.number, "unknown step kind '" + kind + "'");
    }
    sc.steps.push_back(step);
  } else {
    throw ConfigError(ln.number, "unknown key '" + ln.key + "' in [scenario]");
  }
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen_sections;
  bool version_seen = false;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::string first;
    if (!(ss >> first)) continue;

    if (first.front() == '[') {
      if (first.back() != ']' || first.size() < 3) {
        throw ConfigError(line_no, "malformed section header '" + first + "'");
      }
      section = first.substr(1, first.size() - 2);
      static const std::set<std::string> known{"chain", "transmission", "controller", "plant",
                                               "scenario"};
      if (!known.count(section)) {
        throw ConfigError(line_no, "unknown section [" + section + "]");
      }
      seen_sections.insert(section);
      continue;
    }

    Line ln;
    ln.number = line_no;
    ln.key = first;
    std::string arg;
    while (ss >> arg) ln.args.push_back(arg);

    if (section.empty()) {
      if (ln.key == "format_version") {
        need_args(ln, 1);
        cfg.format_version = to_int(ln, ln.args[0]);
        if (cfg.format_version != 1) {
          throw ConfigError(line_no, "unsupported format_version " + ln.args[0]);
        }
        version_seen = true;
        continue;
      }
      throw ConfigError(line_no, "key '" + ln.key + "' outside any section");
    }

    if (section == "chain") parse_chain(ln, cfg.sim.chain);
    else if (section == "transmission") parse_transmission(ln, cfg.sim.transmission);
    else if (section == "controller") parse_controller(ln, cfg.sim);
    else if (section == "plant") parse_plant(ln, cfg.sim.plant);
    else if (section == "scenario") parse_scenario(ln, cfg.scenario);
  }

  if (!version_seen) throw ConfigError(0, "missing required key 'format_version'");
  for (const char* required : {"chain", "transmission", "controller", "plant", "scenario"}) {
    if (!seen_sections.count(required)) {
      throw ConfigError(0, std::string("missing required section [") + required + "]");
    }
  }

  cfg.sim.validate();
  cfg.scenario.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file: " + path.string());
  return parse_run_config(in);
}

}  // namespace rwd
