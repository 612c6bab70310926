#include "obstacle/exponents.hpp"

#include <algorithm>
#include <stdexcept>

namespace obstacle {

ExponentSet compute_exponents(int n, double p, double q, double beta1) {
  if (n < 1) throw std::invalid_argument("exponents: dimension must be >= 1");
  if (!(p > 0)) throw std::invalid_argument("exponents: p must be positive");
  if (!(p <= q)) throw std::invalid_argument("exponents: need p <= q");
  if (!(q > n)) throw std::invalid_argument("exponents: need q > n");
  // The admissible lower range for p is open above n/2; below that the decay
  // exponent alpha0 would leave (0,1] and every estimate downstream degrades.
  if (!(p > 0.5 * n))
    throw std::invalid_argument("exponents: need p > n/2");
  if (!(beta1 > 0 && beta1 < 1))
    throw std::invalid_argument("exponents: beta1 must lie in (0,1)");

  ExponentSet e;
  e.n = n;
  e.p = p;
  e.q = q;
  e.beta1 = beta1;
  e.alpha0 = 2.0 - n / std::min(p, static_cast<double>(n));
  if (p > n) {
    e.beta0 = 1.0 - n / p;
    e.beta2 = std::min(*e.beta0, beta1);
  }
  return e;
}

} // namespace obstacle
