#include "rwdrive/sim_log.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace rwd {

namespace {

constexpr int kColumns = 28;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const std::string& SimulationLog::csv_header() {
  static const std::string header =
      "t,mode,phase,"
      "q_ref1,q_ref2,q_ref3,"
      "q_hat1,q_hat2,q_hat3,"
      "q_plant1,q_plant2,q_plant3,"
      "F_motor1,F_motor2,F_motor3,F_motor4,"
      "F_plant1,F_plant2,F_plant3,F_plant4,"
      "theta_motor1,theta_motor2,theta_motor3,theta_motor4,"
      "vsc_prox,vsc_dist,agi_state,displacement";
  return header;
}

void SimulationLog::write_csv(std::ostream& out) const {
  out << "# seed " << seed << " dt " << fmt(dt) << "\n";
  out << csv_header() << "\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << r.mode << ',' << r.phase;
    for (double v : r.q_ref) out << ',' << fmt(v);
    for (double v : r.q_hat) out << ',' << fmt(v);
    for (double v : r.q_plant) out << ',' << fmt(v);
    for (double v : r.f_motor) out << ',' << fmt(v);
    for (double v : r.f_plant) out << ',' << fmt(v);
    for (double v : r.theta_motor) out << ',' << fmt(v);
    out << ',' << fmt(r.vsc_prox) << ',' << fmt(r.vsc_dist) << ',' << r.agi_state << ','
        << fmt(r.displacement) << "\n";
  }
}

SimulationLog SimulationLog::read_csv(std::istream& in) {
  SimulationLog log;
  std::string line;
  int line_no = 0;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key;
      while (meta >> key) {
        if (key == "seed") meta >> log.seed;
        else if (key == "dt") meta >> log.dt;
      }
      continue;
    }
    if (!header_seen) {
      if (line != csv_header()) {
        throw LogSchemaError("line " + std::to_string(line_no) +
                             ": unexpected header, column order must be: " + csv_header());
      }
      header_seen = true;
      continue;
    }

    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != kColumns) {
      throw LogSchemaError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(kColumns) + " columns, got " +
                           std::to_string(fields.size()));
    }

    size_t idx = 0;
    auto next_double = [&](const char* name) {
      const std::string& s = fields[idx++];
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (end == s.c_str() || *end != '\0') {
        throw LogSchemaError("line " + std::to_string(line_no) + ", column " +
                             std::string(name) + ": not a number: '" + s + "'");
      }
      return v;
    };
    auto next_int = [&](const char* name) {
      const std::string& s = fields[idx++];
      char* end = nullptr;
      const long v = std::strtol(s.c_str(), &end, 10);
      if (end == s.c_str() || *end != '\0') {
        throw LogSchemaError("line " + std::to_string(line_no) + ", column " +
                             std::string(name) + ": not an integer: '" + s + "'");
      }
      return static_cast<int>(v);
    };

    LogRow r;
    r.t = next_double("t");
    r.mode = next_int("mode");
    r.phase = next_int("phase");
    for (auto& v : r.q_ref) v = next_double("q_ref");
    for (auto& v : r.q_hat) v = next_double("q_hat");
    for (auto& v : r.q_plant) v = next_double("q_plant");
    for (auto& v : r.f_motor) v = next_double("F_motor");
    for (auto& v : r.f_plant) v = next_double("F_plant");
    for (auto& v : r.theta_motor) v = next_double("theta_motor");
    r.vsc_prox = next_double("vsc_prox");
    r.vsc_dist = next_double("vsc_dist");
    r.agi_state = next_int("agi_state");
    r.displacement = next_double("displacement");
    log.rows.push_back(r);
  }
  if (!header_seen) throw LogSchemaError("log contains no header row");
  if (log.dt == 0.0 && log.rows.size() >= 2) log.dt = log.rows[1].t - log.rows[0].t;
  return log;
}

}  // namespace rwd
