#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "obstacle/problem.hpp"
#include "obstacle/solver.hpp"

namespace obstacle {

// A fully spelled-out scenario: grid, operator, data, solver knobs, output.
// Expression-valued entries keep their source text so a config survives a
// serialize/parse round trip byte for byte.
struct ScenarioConfig {
  std::string scenario; // builtin name this config started from, if any
  std::uint64_t seed = 0;

  // [grid]
  int dim = 1;
  double lo1 = -1.0, hi1 = 1.0;
  int nodes1 = 257;
  double lo2 = -1.0, hi2 = 1.0;
  int nodes2 = 0; // required iff dim == 2

  // [operator]
  std::string family = "linear"; // linear | bellman_max | pucci_plus | pucci_minus
  double lambda = 1.0, Lambda = 1.0;
  std::string a11 = "1", a12 = "0", a22 = "1", b1 = "0", b2 = "0";
  std::string mu = "0"; // pucci families only
  // bellman_max members, keys a11_1 = ..., b2_3 = ... inside [operator]
  std::vector<std::array<std::string, 5>> member_coeffs;

  // [data]
  std::string f = "0", phi = "-1000", psi = "1000", g = "0";
  double p = 4.0, q = 4.0, beta1 = 0.5;
  double r0 = -1.0;   // < 0 means not declared
  double eps0 = 0.5;  // integrability exponent for ratio probes

  // [solver]
  double tolerance = 1e-10;
  int max_outer = 200;
  int max_inner = 50;
  double delta0 = 1e-2;
  double delta_factor = 0.5;
  double delta_floor = 1e-6;
  double epsilon = 0.0;
  double damping = 1.0;
  std::string tie_break = "pde"; // pde | contact
  double contact_tol = -1.0;

  // [output]
  std::string out_dir = "out";

  bool operator==(const ScenarioConfig&) const = default;

  SolverConfig solver_config() const;
};

// Parses INI-style text: top-level `scenario =` / `seed =`, then sections
// [grid], [operator], [data], [solver], [output].  A `scenario` key loads
// the named builtin first; later keys overlay it.  Every failure throws
// std::invalid_argument naming the offending line, section, and key.
ScenarioConfig parse_config(const std::string& text);

// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& cfg);

// FNV-1a over the canonical serialization, quoted in artifact headers.
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t config_hash(const ScenarioConfig& cfg);

// Instantiates the grid, operator, and data fields.  Throws with the
// offending key name on invalid combinations (bad ellipticity window,
// missing 2D extents, expressions using x2 on a 1D grid, ...).
ProblemSpec build_problem(const ScenarioConfig& cfg);

} // namespace obstacle
