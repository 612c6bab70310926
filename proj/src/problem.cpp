#include "obstacle/problem.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace obstacle {

void ProblemSpec::validate() const {
  if (!(lambda > 0) || !(lambda <= Lambda))
    throw std::invalid_argument("problem: need 0 < lambda <= Lambda");
  if (op.dim != grid.dim)
    throw std::invalid_argument("problem: operator dimension does not match grid");
  for (const ScalarField* fld : {&mu, &f, &phi, &psi, &g}) {
    if (fld->grid != grid)
      throw std::invalid_argument("problem: field defined on a different grid");
    if (!fld->all_finite())
      throw std::invalid_argument("problem: field contains non-finite values");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!(mu.v[k] >= 0))
      throw std::invalid_argument("problem: mu must be nonnegative (node " +
                                  std::to_string(k) + ")");
    if (!(phi.v[k] <= psi.v[k]))
      throw std::invalid_argument("problem: obstacles out of order, phi > psi at node " +
                                  std::to_string(k));
    if (r0 && !(psi.v[k] - phi.v[k] >= *r0))
      throw std::invalid_argument("problem: declared separation r0 violated at node " +
                                  std::to_string(k));
    if (grid.is_boundary(k)) {
      if (!(phi.v[k] <= g.v[k] && g.v[k] <= psi.v[k]))
        throw std::invalid_argument(
            "problem: boundary data outside the obstacle band at node " +
            std::to_string(k));
    }
  }
  if (exponents.n != grid.dim)
    throw std::invalid_argument("problem: exponent dimension does not match grid");
}

ProblemSpec make_problem(const Grid& grid, OperatorSpec op, ScalarField f,
                         ScalarField phi, ScalarField psi, ScalarField g,
                         const ExponentSet& exponents,
                         std::optional<double> r0) {
  ProblemSpec p;
  p.grid = grid;
  p.lambda = op.lambda;
  p.Lambda = op.Lambda;
  p.mu = op.mu;
  p.op = std::move(op);
  p.f = std::move(f);
  p.phi = std::move(phi);
  p.psi = std::move(psi);
  p.g = std::move(g);
  p.exponents = exponents;
  p.r0 = r0;
  p.validate();
  return p;
}

} // namespace obstacle
