#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obstacle/config.hpp"

namespace obstacle {

// Exit codes shared by the runner and the CLI wrapper.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 2;  // solved but an invariant failed, or bad input
inline constexpr int kExitNoConverge = 3; // a solver gave up

struct RunOptions {
  std::string command; // solve | verify | analyze | sweep-h | sweep-delta | identity-test
  std::string solver = "both"; // penalized | direct | both
  std::optional<std::uint64_t> seed;
  std::string out_dir; // overrides the config's [output] dir when nonempty
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string out_dir;
  std::string solution_path; // empty when the command did not write it
  std::string report_path;
  std::string analysis_path;
  std::vector<std::string> log; // human-readable progress lines
  std::string message;          // one-line outcome
};

RunOutcome run_scenario(ScenarioConfig cfg, const RunOptions& opt);

} // namespace obstacle
