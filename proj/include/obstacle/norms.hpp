#pragma once

#include <utility>
#include <vector>

#include "obstacle/grid.hpp"
#include "obstacle/parallel.hpp"

namespace obstacle {

// Grid quadrature of (sum |u_i|^p h^n)^(1/p) over the given node set.
// A genuine norm for p >= 1 and a quasi-norm for p in (0,1), where the
// triangle inequality holds with constant 2^(1/p - 1).
double lp_quasinorm(const ScalarField& field, double p, const Region& region,
                    Exec ex = Exec::Serial);

// Joint modulus of continuity of an obstacle pair: for each radius r the
// largest |phi(x)-phi(y)| or |psi(x)-psi(y)| over node pairs with
// |x-y| <= r.  Exact pair scan up to 10^4 nodes; larger grids fall back to
// per-axis sliding-window extremes (axis-aligned pairs only).
std::vector<std::pair<double, double>> sample_modulus(
    const ScalarField& phi, const ScalarField& psi,
    const std::vector<double>& radii, Exec ex = Exec::Serial);

} // namespace obstacle
