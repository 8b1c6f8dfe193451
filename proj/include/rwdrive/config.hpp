#pragma once

#include "rwdrive/sequencer.hpp"
#include "rwdrive/types.hpp"

#include <filesystem>
#include <iosfwd>

namespace rwd {

// A full run description: module parameters plus the scenario program.
// Parsed from the sectioned key-value format described in
// docs/config_format.md.
struct RunConfig {
  int format_version = 1;
  SimConfig sim;
  Scenario scenario;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace rwd
