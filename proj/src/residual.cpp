#include "obstacle/residual.hpp"

#include <algorithm>
#include <cmath>

#include "obstacle/norms.hpp"
#include "obstacle/stencil.hpp"

namespace obstacle {

ScalarField assemble_residual(const ProblemSpec& problem, const ScalarField& u,
                              Exec ex) {
  const Grid& g = problem.grid;
  ScalarField res(g);
  parallel_map(g.size(), ex, [&](std::size_t k) {
    if (g.is_boundary(k)) {
      res.v[k] = u.v[k] - problem.g.v[k];
      return;
    }
    const double A = discretize_operator(problem.op, u, k) - problem.f.v[k];
    const double B = u.v[k] - problem.psi.v[k];
    const double C = u.v[k] - problem.phi.v[k];
    res.v[k] = minmax_reduction(A, B, C).value;
  });
  return res;
}

MollifiedData prepare_mollified(const ProblemSpec& problem, double eps) {
  MollifiedData d;
  d.eps = eps;
  d.op = problem.op;
  if (eps < problem.grid.min_spacing()) {
    d.identity = true;
    d.f = problem.f;
    d.phi_eps = problem.phi;
    d.psi_eps = problem.psi;
    return d;
  }
  d.f = mollify(problem.f, eps, Extension::Zero).field;
  d.op.mu = mollify(problem.op.mu, eps, Extension::Zero).field;
  const auto modulus = sample_modulus(problem.phi, problem.psi, {eps});
  auto shifted = shift_obstacles(problem.phi, problem.psi, eps, modulus);
  d.phi_eps = std::move(shifted.first);
  d.psi_eps = std::move(shifted.second);
  return d;
}

ScalarField assemble_penalized_residual(const ProblemSpec& problem,
                                        const MollifiedData& data, double delta,
                                        const ScalarField& u, Exec ex) {
  const Grid& g = problem.grid;
  const double inv_delta = 1.0 / delta;
  ScalarField res(g);
  parallel_map(g.size(), ex, [&](std::size_t k) {
    if (g.is_boundary(k)) {
      res.v[k] = u.v[k] - problem.g.v[k];
      return;
    }
    const double fh = discretize_operator(data.op, u, k);
    const double over = std::max(u.v[k] - data.psi_eps.v[k], 0.0);
    const double under = std::max(data.phi_eps.v[k] - u.v[k], 0.0);
    res.v[k] = fh + inv_delta * over - inv_delta * under - data.f.v[k];
  });
  return res;
}

double penalty_sup(const MollifiedData& data, double delta,
                   const ScalarField& u) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double over = std::max(u.v[k] - data.psi_eps.v[k], 0.0);
    const double under = std::max(data.phi_eps.v[k] - u.v[k], 0.0);
    s = std::max(s, (over + under) / delta);
  }
  return s;
}

} // namespace obstacle
