#include "obstacle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "obstacle/residual.hpp"
#include "obstacle/stencil.hpp"

namespace obstacle {

VerifyDiagnostics verify_solution(const ProblemSpec& problem,
                                  const ScalarField& u, double tol) {
  const Grid& g = problem.grid;
  VerifyDiagnostics d;
  d.partition = coincidence_sets(u, problem.phi, problem.psi, tol, problem.r0);

  const ScalarField res = assemble_residual(problem, u, Exec::Parallel);
  d.subsolution_slack = -std::numeric_limits<double>::infinity();
  d.supersolution_slack = -std::numeric_limits<double>::infinity();
  bool any_sub = false, any_super = false;

  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) {
      d.max_boundary_mismatch =
          std::max(d.max_boundary_mismatch, std::abs(u.v[k] - problem.g.v[k]));
      continue;
    }
    d.max_abs_residual = std::max(d.max_abs_residual, std::abs(res.v[k]));

    const double below = problem.phi.v[k] - u.v[k];
    const double above = u.v[k] - problem.psi.v[k];
    const double viol = std::max({below, above, 0.0});
    if (viol > d.max_obstacle_violation) d.max_obstacle_violation = viol;
    if (viol > tol) d.violating_nodes.push_back(k);

    const double op_gap = discretize_operator(problem.op, u, k) - problem.f.v[k];
    if (u.v[k] > problem.phi.v[k] + tol) {
      d.subsolution_slack = std::max(d.subsolution_slack, op_gap);
      any_sub = true;
    }
    if (u.v[k] < problem.psi.v[k] - tol) {
      d.supersolution_slack = std::max(d.supersolution_slack, -op_gap);
      any_super = true;
    }
  }
  if (!any_sub) d.subsolution_slack = 0.0;
  if (!any_super) d.supersolution_slack = 0.0;
  return d;
}

} // namespace obstacle
