#include "obstacle/sym.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obstacle {

std::array<double, 2> SymMatrix::eigenvalues() const {
  if (n == 1) return {a11, 0.0};
  const double mean = (a11 + a22) / 2.0;
  const double half_gap = (a11 - a22) / 2.0;
  const double disc = half_gap * half_gap + a12 * a12;
  const double s = std::sqrt(std::max(disc, 0.0));
  return {mean - s, mean + s};
}

double SymMatrix::norm() const {
  const auto e = eigenvalues();
  if (n == 1) return std::abs(e[0]);
  return std::max(std::abs(e[0]), std::abs(e[1]));
}

double pucci_extremal(PucciSign sign, const SymMatrix& X, double lambda,
                      double Lambda) {
  if (!(lambda > 0) || !(lambda <= Lambda))
    throw std::invalid_argument("pucci_extremal: need 0 < lambda <= Lambda");
  const auto eig = X.eigenvalues();
  double pos = 0.0, neg = 0.0;
  const int m = X.n;
  for (int i = 0; i < m; ++i) {
    pos += std::max(eig[i], 0.0);
    neg += std::max(-eig[i], 0.0);
  }
  if (sign == PucciSign::Plus) return Lambda * neg - lambda * pos;
  return lambda * neg - Lambda * pos;
}

} // namespace obstacle
