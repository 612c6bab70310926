#pragma once

#include <array>
#include <optional>
#include <vector>

#include "obstacle/grid.hpp"

namespace obstacle {

enum class Regime : unsigned char { Lower, Pde, Upper };

// Per-node regime labels with the contact sets they induce.  Labels are
// meaningful on interior nodes; boundary nodes are carried as Pde and
// excluded from every derived set.
struct RegimePartition {
  Grid grid;
  std::vector<Regime> label;
  double tol = 0.0;

  Region lower_contact() const;  // C^-: nodes glued to the lower obstacle
  Region upper_contact() const;  // C^+
  Region noncontact() const;     // N: interior away from both obstacles
  // Nodes more than r inside the domain and more than r from any contact
  // node.  Shrinks as r grows.
  Region n_r(double r) const;
  std::array<std::size_t, 3> counts() const; // lower, pde, upper
};

// Labels nodes by proximity to the obstacles: lower when u - phi <= tol,
// upper when psi - u <= tol, pde otherwise.  A node within tol of both
// obstacles is a data error whenever a separation r0 was declared (the
// declared gap should have made that impossible); without r0 the closer
// obstacle wins.
RegimePartition coincidence_sets(const ScalarField& u, const ScalarField& phi,
                                 const ScalarField& psi, double tol,
                                 std::optional<double> r0 = {});

} // namespace obstacle
