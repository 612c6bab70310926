#include "obstacle/partition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace obstacle {

namespace {

Region select(const RegimePartition& p, Regime r) {
  Region out;
  for (std::size_t k = 0; k < p.label.size(); ++k)
    if (p.grid.is_interior(k) && p.label[k] == r) out.push_back(k);
  return out;
}

} // namespace

Region RegimePartition::lower_contact() const { return select(*this, Regime::Lower); }
Region RegimePartition::upper_contact() const { return select(*this, Regime::Upper); }
Region RegimePartition::noncontact() const { return select(*this, Regime::Pde); }

Region RegimePartition::n_r(double r) const {
  Region contact;
  for (std::size_t k = 0; k < label.size(); ++k)
    if (grid.is_interior(k) && label[k] != Regime::Pde) contact.push_back(k);

  Region out;
  const double r2 = r * r;
  for (std::size_t k = 0; k < label.size(); ++k) {
    if (!grid.is_interior(k) || label[k] != Regime::Pde) continue;
    if (!(grid.boundary_distance(k) > r)) continue;
    const auto x = grid.coord(k);
    double dmin2 = std::numeric_limits<double>::infinity();
    for (std::size_t c : contact) {
      const auto y = grid.coord(c);
      const double dx = x[0] - y[0];
      const double dy = grid.dim == 2 ? x[1] - y[1] : 0.0;
      dmin2 = std::min(dmin2, dx * dx + dy * dy);
    }
    if (dmin2 > r2) out.push_back(k);
  }
  return out;
}

std::array<std::size_t, 3> RegimePartition::counts() const {
  std::array<std::size_t, 3> c{0, 0, 0};
  for (std::size_t k = 0; k < label.size(); ++k) {
    if (!grid.is_interior(k)) continue;
    if (label[k] == Regime::Lower) ++c[0];
    else if (label[k] == Regime::Pde) ++c[1];
    else ++c[2];
  }
  return c;
}

RegimePartition coincidence_sets(const ScalarField& u, const ScalarField& phi,
                                 const ScalarField& psi, double tol,
                                 std::optional<double> r0) {
  if (!(tol >= 0))
    throw std::invalid_argument("coincidence_sets: tolerance must be >= 0");
  if (u.grid != phi.grid || u.grid != psi.grid)
    throw std::invalid_argument("coincidence_sets: fields on different grids");

  RegimePartition p;
  p.grid = u.grid;
  p.tol = tol;
  p.label.assign(u.size(), Regime::Pde);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!u.grid.is_interior(k)) continue;
    const double lo_gap = u.v[k] - phi.v[k];
    const double hi_gap = psi.v[k] - u.v[k];
    const bool lo = lo_gap <= tol;
    const bool hi = hi_gap <= tol;
    if (lo && hi) {
      if (r0)
        throw std::invalid_argument(
            "coincidence_sets: node " + std::to_string(k) +
            " sits within tol of both obstacles although a separation r0 was "
            "declared; the data and the tolerance are inconsistent");
      p.label[k] = lo_gap <= hi_gap ? Regime::Lower : Regime::Upper;
    } else if (lo) {
      p.label[k] = Regime::Lower;
    } else if (hi) {
      p.label[k] = Regime::Upper;
    }
  }
  return p;
}

} // namespace obstacle
