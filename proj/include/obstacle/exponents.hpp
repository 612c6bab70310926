#pragma once

#include <optional>

namespace obstacle {

// Integrability and regularity bookkeeping.  alpha0 drives the oscillation
// decay estimates; beta0 exists only in the supercritical range p > n.
struct ExponentSet {
  int n = 1;
  double p = 2.0;
  double q = 2.0;
  double beta1 = 0.5;
  double alpha0 = 1.0;                 // 2 - n/min(p,n), always in (0,1]
  std::optional<double> beta0;         // 1 - n/p when p > n
  std::optional<double> beta2;         // min(beta0, beta1) when beta0 exists

  bool operator==(const ExponentSet&) const = default;
};

// Validates the admissible range (p <= q, q > n, p > n/2, beta1 in (0,1))
// and fills in the derived exponents.  Throws std::invalid_argument with a
// message naming the violated constraint.
ExponentSet compute_exponents(int n, double p, double q, double beta1);

} // namespace obstacle
