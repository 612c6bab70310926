#pragma once

#include "obstacle/partition.hpp"
#include "obstacle/problem.hpp"

namespace obstacle {

// Pure diagnostics of a candidate solution.  Nothing here throws on a bad
// solution; violations are data for the caller.
struct VerifyDiagnostics {
  double max_obstacle_violation = 0.0;   // how far u escapes [phi, psi]
  double max_abs_residual = 0.0;         // sup of the assembled interior residual
  double max_boundary_mismatch = 0.0;    // sup |u - g| on boundary nodes
  // Three-regime consistency: above the lower obstacle the operator side
  // must not exceed tol, below the upper obstacle it must not fall under
  // -tol.  Stored as the worst signed slack in each direction.
  double subsolution_slack = 0.0; // max of (F_h - f) over { u > phi + tol }
  double supersolution_slack = 0.0; // max of (f - F_h) over { u < psi - tol }
  RegimePartition partition;
  std::vector<std::size_t> violating_nodes; // nodes outside the obstacle band

  bool within(double tol) const {
    return max_obstacle_violation <= tol && max_abs_residual <= tol &&
           max_boundary_mismatch <= tol && subsolution_slack <= tol &&
           supersolution_slack <= tol;
  }
};

VerifyDiagnostics verify_solution(const ProblemSpec& problem,
                                  const ScalarField& u, double tol);

} // namespace obstacle
