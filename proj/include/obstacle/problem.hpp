#pragma once

#include <optional>

#include "obstacle/exponents.hpp"
#include "obstacle/grid.hpp"
#include "obstacle/operator_spec.hpp"

namespace obstacle {

// Full problem data for
//   min{ max{ F(x,Du,D^2u) - f, u - psi }, u - phi } = 0  in the interior,
//   u = g on the boundary.
// lambda, Lambda and mu mirror the operator's own tags so reports can quote
// them without reaching into the OperatorSpec.
struct ProblemSpec {
  Grid grid;
  OperatorSpec op;
  double lambda = 1.0;
  double Lambda = 1.0;
  ScalarField mu;
  ScalarField f;
  ScalarField phi;
  ScalarField psi;
  ScalarField g; // read on boundary nodes only
  ExponentSet exponents;
  std::optional<double> r0; // declared obstacle separation, if any

  // Throws std::invalid_argument naming the first violated constraint:
  // grids must agree, obstacles must be ordered with the boundary data
  // in between, mu must be nonnegative, fields finite, and a declared r0
  // must actually separate the obstacles.
  void validate() const;
};

ProblemSpec make_problem(const Grid& grid, OperatorSpec op, ScalarField f,
                         ScalarField phi, ScalarField psi, ScalarField g,
                         const ExponentSet& exponents,
                         std::optional<double> r0 = {});

} // namespace obstacle
