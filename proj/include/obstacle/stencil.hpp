#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "obstacle/grid.hpp"
#include "obstacle/operator_spec.hpp"

namespace obstacle {

// Stencil directions.  DiagUp is the lattice step (+h1, +h2), DiagDown is
// (+h1, -h2); together with the axes they give two orthogonal direction
// pairs on square-spaced grids.
enum class StencilDirection { Axis1, Axis2, DiagUp, DiagDown };

bool has_stencil_neighbors(const Grid& g, std::size_t node, StencilDirection d);

// Normalized second difference (u(x+s) - 2u(x) + u(x-s)) / |s|^2 where s is
// the lattice step along d.  Consistent with the unit-direction second
// derivative and exact on quadratics.  Throws if a neighbor is missing.
double directional_second_difference(const ScalarField& u, std::size_t node,
                                     StencilDirection d);

// Rejects operator specs with no monotone finite-difference realization on
// this grid: custom specs without a supplied discrete form, cross terms
// breaking diagonal dominance (|a12| must not exceed a11 or a22), and
// diagonal stencils on non-square spacing.
void validate_discretizable(const OperatorSpec& spec, const Grid& g);

// F_h[u] at an interior node: the monotone finite-difference value of the
// operator.  Degenerate ellipticity holds by construction, every neighbor
// enters with a nonpositive coefficient on each frozen branch.
double discretize_operator(const OperatorSpec& spec, const ScalarField& u,
                           std::size_t node);

// One row of the branch-frozen linearization of F_h at u:
//   F_h[v](node) ~= diag*v(node) + sum off_i*v(nbr_i) + c0,
// exact for v = u and for any v sharing u's active branches.  `signature`
// encodes the chosen branches so Howard-style inner loops can detect when
// the freeze has stabilized.
struct FrozenRow {
  double diag = 0.0;
  double c0 = 0.0;
  std::array<std::pair<std::size_t, double>, 8> off{};
  int noff = 0;
  std::uint32_t signature = 0;

  void add_off(std::size_t col, double coef);
  double apply(const ScalarField& v, std::size_t node) const;
};

FrozenRow freeze_row(const OperatorSpec& spec, const ScalarField& u,
                     std::size_t node);

// Scale of one frozen row, |diag| + sum |off| listed with the constant term.
// Used by the stopping rules to bound the float evaluation noise of the
// assembled residual.
double row_scale(const FrozenRow& row);

} // namespace obstacle
