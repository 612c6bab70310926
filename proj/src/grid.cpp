#include "obstacle/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace obstacle {

static void check_axis(double lo, double hi, int n) {
  if (!(lo < hi)) throw std::invalid_argument("grid: bounds must satisfy lo < hi");
  if (n < 3) throw std::invalid_argument("grid: need at least 3 nodes per axis");
}

Grid Grid::line(double lo, double hi, int n) {
  check_axis(lo, hi, n);
  Grid g;
  g.dim = 1;
  g.lo = {lo, 0.0};
  g.hi = {hi, 0.0};
  g.nodes = {n, 1};
  g.h = {(hi - lo) / (n - 1), 1.0};
  return g;
}

Grid Grid::box(double lo1, double hi1, int n1, double lo2, double hi2, int n2) {
  check_axis(lo1, hi1, n1);
  check_axis(lo2, hi2, n2);
  Grid g;
  g.dim = 2;
  g.lo = {lo1, lo2};
  g.hi = {hi1, hi2};
  g.nodes = {n1, n2};
  g.h = {(hi1 - lo1) / (n1 - 1), (hi2 - lo2) / (n2 - 1)};
  return g;
}

double Grid::boundary_distance(std::size_t k) const {
  const auto x = coord(k);
  double d = std::min(x[0] - lo[0], hi[0] - x[0]);
  if (dim == 2) d = std::min({d, x[1] - lo[1], hi[1] - x[1]});
  return d;
}

double ScalarField::sup_norm() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double ScalarField::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

double ScalarField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) m = std::min(m, x);
  return m;
}

bool ScalarField::all_finite() const {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

Region all_nodes(const Grid& g) {
  Region r(g.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = k;
  return r;
}

Region interior_nodes(const Grid& g) {
  Region r;
  r.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.is_interior(k)) r.push_back(k);
  return r;
}

Region boundary_nodes(const Grid& g) {
  Region r;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.is_boundary(k)) r.push_back(k);
  return r;
}

Region ball_nodes(const Grid& g, const std::array<double, 2>& center, double r) {
  if (!(r > 0)) throw std::invalid_argument("ball_nodes: radius must be positive");
  Region out;
  const double r2 = r * r;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.coord(k);
    const double dx = x[0] - center[0];
    const double dy = g.dim == 2 ? x[1] - center[1] : 0.0;
    if (dx * dx + dy * dy <= r2) out.push_back(k);
  }
  return out;
}

Region margin_nodes(const Grid& g, double margin) {
  Region out;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.boundary_distance(k) > margin) out.push_back(k);
  return out;
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("sup_distance: fields have different sizes");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    m = std::max(m, std::abs(a.v[k] - b.v[k]));
  return m;
}

} // namespace obstacle
