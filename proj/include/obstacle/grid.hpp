#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace obstacle {

// Uniform rectangular lattice in 1 or 2 dimensions.  Node order is row-major
// with the last axis fastest, i.e. in 2D the flat index is i1*nodes[1] + i2.
struct Grid {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<int, 2> nodes{2, 1};
  std::array<double, 2> h{1.0, 1.0};

  static Grid line(double lo, double hi, int n);
  static Grid box(double lo1, double hi1, int n1,
                  double lo2, double hi2, int n2);

  std::size_t size() const {
    return static_cast<std::size_t>(nodes[0]) *
           static_cast<std::size_t>(dim == 2 ? nodes[1] : 1);
  }

  std::size_t flat(int i1, int i2 = 0) const {
    return dim == 1 ? static_cast<std::size_t>(i1)
                    : static_cast<std::size_t>(i1) * nodes[1] + i2;
  }

  std::array<int, 2> multi(std::size_t k) const {
    if (dim == 1) return {static_cast<int>(k), 0};
    return {static_cast<int>(k) / nodes[1], static_cast<int>(k) % nodes[1]};
  }

  std::array<double, 2> coord(std::size_t k) const {
    const auto ij = multi(k);
    return {lo[0] + ij[0] * h[0], dim == 2 ? lo[1] + ij[1] * h[1] : 0.0};
  }

  bool is_boundary(std::size_t k) const {
    const auto ij = multi(k);
    if (ij[0] == 0 || ij[0] == nodes[0] - 1) return true;
    if (dim == 2 && (ij[1] == 0 || ij[1] == nodes[1] - 1)) return true;
    return false;
  }
  bool is_interior(std::size_t k) const { return !is_boundary(k); }

  // Euclidean distance from a node to the domain boundary.
  double boundary_distance(std::size_t k) const;

  double cell_volume() const { return dim == 1 ? h[0] : h[0] * h[1]; }
  double min_spacing() const { return dim == 1 ? h[0] : (h[0] < h[1] ? h[0] : h[1]); }
  double extent(int axis) const { return hi[axis] - lo[axis]; }

  bool operator==(const Grid&) const = default;
};

// Nodal real values over a grid.  The grid is stored by value; it is a small
// POD so copies are cheap and fields stay self-describing.
struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double init = 0.0)
      : grid(g), v(g.size(), init) {}

  double& operator[](std::size_t k) { return v[k]; }
  double operator[](std::size_t k) const { return v[k]; }
  std::size_t size() const { return v.size(); }

  double sup_norm() const;
  double max_value() const;
  double min_value() const;
  bool all_finite() const;
};

using Region = std::vector<std::size_t>;

Region all_nodes(const Grid& g);
Region interior_nodes(const Grid& g);
Region boundary_nodes(const Grid& g);
// Nodes within Euclidean distance r of a center point.
Region ball_nodes(const Grid& g, const std::array<double, 2>& center, double r);
// Nodes whose distance to the domain boundary exceeds margin.
Region margin_nodes(const Grid& g, double margin);

// Difference of two fields on the same grid, max |a-b|.
double sup_distance(const ScalarField& a, const ScalarField& b);

// Build a field by evaluating fn at every node coordinate.
template <class Fn>
ScalarField field_from(const Grid& g, Fn&& fn) {
  ScalarField out(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.coord(k);
    out.v[k] = fn(x[0], x[1]);
  }
  return out;
}

} // namespace obstacle
