#pragma once

#include "obstacle/mollifier.hpp"
#include "obstacle/parallel.hpp"
#include "obstacle/problem.hpp"

namespace obstacle {

// Obstacle-problem residual:
//   interior: min( max( F_h[u] - f, u - psi ), u - phi )
//   boundary: u - g
// The zero set of this field is the discrete solution.
ScalarField assemble_residual(const ProblemSpec& problem, const ScalarField& u,
                              Exec ex = Exec::Serial);

// Data after mollification at radius eps: f and mu continue by zero, the
// obstacles are mollified with nearest-value extension and shifted apart by
// the modulus value, and the operator carries the mollified mu.
struct MollifiedData {
  double eps = 0.0;
  bool identity = false; // eps below grid spacing, data untouched
  OperatorSpec op;
  ScalarField f;
  ScalarField phi_eps;
  ScalarField psi_eps;
};

MollifiedData prepare_mollified(const ProblemSpec& problem, double eps);

// Penalized residual at penalty weight 1/delta:
//   interior: F_h[u] + (1/delta)(u - psi_eps)^+ - (1/delta)(phi_eps - u)^+ - f_eps
//   boundary: u - g
ScalarField assemble_penalized_residual(const ProblemSpec& problem,
                                        const MollifiedData& data, double delta,
                                        const ScalarField& u,
                                        Exec ex = Exec::Serial);

// Pointwise penalty magnitude (1/delta)[(u - psi_eps)^+ + (phi_eps - u)^+],
// returned as its sup over all nodes.
double penalty_sup(const MollifiedData& data, double delta,
                   const ScalarField& u);

} // namespace obstacle
