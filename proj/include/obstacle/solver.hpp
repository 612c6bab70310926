#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "obstacle/problem.hpp"
#include "obstacle/residual.hpp"

namespace obstacle {

struct SolverConfig {
  // Convergence is declared at the residual sup-norm tolerance, or at the
  // float evaluation floor of the assembled residual when that floor sits
  // above the tolerance (second differences scale like 1/h^2, penalties
  // like 1/delta, so on fine grids the default tolerance is below what a
  // double evaluation of the residual can certify).
  double tolerance = 1e-10;
  int max_outer = 200; // Newton iterations per delta / policy iterations
  int max_inner = 50;  // branch refreezes inside one policy step
  double delta0 = 1e-2;
  double delta_factor = 0.5;
  double delta_floor = 1e-6;
  double epsilon = 0.0; // mollification radius; below h means raw data
  double damping = 1.0;
  TieBreak tie_break = TieBreak::PreferPde;
  double contact_tol = -1.0; // < 0 selects 10*tolerance + h^2

  void validate() const;
  std::vector<double> delta_schedule() const;
  double effective_contact_tol(const Grid& g) const;
};

struct DeltaStep {
  double delta = 0.0;
  double tail = 0.0;        // sup distance to the previous schedule iterate
  double penalty_sup = 0.0; // sup of the penalty terms at this delta
  int iterations = 0;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<DeltaStep> delta_path;     // continuation runs only
  std::vector<double> penalty_trace;     // penalty sups along the schedule
  double final_residual = 0.0;
  double residual_floor = 0.0;           // evaluation-noise bound actually used
  std::array<std::size_t, 3> regime_counts{0, 0, 0}; // lower, pde, upper
  double wall_seconds = 0.0;             // never written into artifacts
  std::string failure_reason;
};

struct SolveResult {
  ScalarField u;
  SolveReport report;
};

// Discrete-harmonic interpolation of the boundary data, then clamped into
// the obstacle band.  The standard feasible initial iterate.
ScalarField initial_iterate(const ProblemSpec& problem, const ScalarField& lo,
                            const ScalarField& hi);

// Damped semismooth Newton on the penalized equation at fixed delta.
// The penalty derivative uses the active-branch indicator, ties toward the
// inactive branch.  On failure the report carries the residual history and
// converged stays false; the returned iterate is the last one reached.
SolveResult solve_penalized(const ProblemSpec& problem, double eps,
                            double delta, const SolverConfig& config,
                            const ScalarField* warm_start = nullptr);

// Runs solve_penalized along the geometric delta schedule with warm starts,
// recording the Cauchy tails and the penalty trace.
SolveResult continuation_solve(const ProblemSpec& problem,
                               const SolverConfig& config);

// Policy iteration on the three-regime form.  Each interior node carries a
// regime in {pde, upper, lower}; rows follow the regime, policies update by
// the Isaacs reduction of (F_h - f, u - psi, u - phi), and a node seen
// flip-flopping between two regimes is frozen to the one with the smaller
// residual magnitude for a few rounds.
SolveResult solve_complementarity(const ProblemSpec& problem,
                                  const SolverConfig& config);

} // namespace obstacle
