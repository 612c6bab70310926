#include "obstacle/norms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace obstacle {

double lp_quasinorm(const ScalarField& field, double p, const Region& region,
                    Exec ex) {
  if (region.empty()) throw std::invalid_argument("lp_quasinorm: empty region");
  if (!(p > 0)) throw std::invalid_argument("lp_quasinorm: p must be positive");
  const double vol = field.grid.cell_volume();
  const double s = blocked_sum(region.size(), ex, [&](std::size_t i) {
    return std::pow(std::abs(field.v[region[i]]), p) * vol;
  });
  return std::pow(s, 1.0 / p);
}

namespace {

constexpr std::size_t kExactPairScanLimit = 10000;

// Exact scan: largest value difference over all node pairs within distance r.
double pair_scan_max(const ScalarField& a, const ScalarField& b, double r,
                     Exec ex) {
  const Grid& g = a.grid;
  const std::size_t n = g.size();
  const double r2 = r * r;
  return blocked_max(n * n, ex, 0.0, [&](std::size_t k) {
    const std::size_t i = k / n, j = k % n;
    if (j <= i) return 0.0;
    const auto xi = g.coord(i), xj = g.coord(j);
    const double dx = xi[0] - xj[0];
    const double dy = g.dim == 2 ? xi[1] - xj[1] : 0.0;
    if (dx * dx + dy * dy > r2) return 0.0;
    return std::max(std::abs(a.v[i] - a.v[j]), std::abs(b.v[i] - b.v[j]));
  });
}

// Largest (max - min) over windows of `width` consecutive entries, via the
// classic pair of monotone deques.
double window_oscillation(const std::vector<double>& line, std::size_t width) {
  if (width <= 1 || line.size() < 2) return 0.0;
  std::deque<std::size_t> maxq, minq;
  double best = 0.0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    while (!maxq.empty() && line[maxq.back()] <= line[i]) maxq.pop_back();
    maxq.push_back(i);
    while (!minq.empty() && line[minq.back()] >= line[i]) minq.pop_back();
    minq.push_back(i);
    const std::size_t lo = i + 1 >= width ? i + 1 - width : 0;
    while (maxq.front() < lo) maxq.pop_front();
    while (minq.front() < lo) minq.pop_front();
    best = std::max(best, line[maxq.front()] - line[minq.front()]);
  }
  return best;
}

// Axis-aligned approximation for large grids: for every grid line along each
// axis, the largest oscillation over windows spanning distance <= r.
double sliding_window_max(const ScalarField& f, double r) {
  const Grid& g = f.grid;
  double best = 0.0;
  // axis 0 lines
  {
    const std::size_t width = static_cast<std::size_t>(std::floor(r / g.h[0])) + 1;
    const int n2 = g.dim == 2 ? g.nodes[1] : 1;
    std::vector<double> line(g.nodes[0]);
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < g.nodes[0]; ++i) line[i] = f.v[g.flat(i, j)];
      best = std::max(best, window_oscillation(line, width));
    }
  }
  if (g.dim == 2) {
    const std::size_t width = static_cast<std::size_t>(std::floor(r / g.h[1])) + 1;
    std::vector<double> line(g.nodes[1]);
    for (int i = 0; i < g.nodes[0]; ++i) {
      for (int j = 0; j < g.nodes[1]; ++j) line[j] = f.v[g.flat(i, j)];
      best = std::max(best, window_oscillation(line, width));
    }
  }
  return best;
}

} // namespace

std::vector<std::pair<double, double>> sample_modulus(
    const ScalarField& phi, const ScalarField& psi,
    const std::vector<double>& radii, Exec ex) {
  if (phi.grid != psi.grid)
    throw std::invalid_argument("sample_modulus: obstacle pair on different grids");
  for (double r : radii)
    if (!(r > 0)) throw std::invalid_argument("sample_modulus: radii must be positive");

  std::vector<std::pair<double, double>> out;
  out.reserve(radii.size());
  const bool exact = phi.grid.size() <= kExactPairScanLimit;
  for (double r : radii) {
    double s;
    if (exact) {
      s = pair_scan_max(phi, psi, r, ex);
    } else {
      s = std::max(sliding_window_max(phi, r), sliding_window_max(psi, r));
    }
    out.emplace_back(r, s);
  }
  return out;
}

} // namespace obstacle
