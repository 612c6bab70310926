// Core data structures: grids, nodal fields, node regions, exponent
// bookkeeping, and the grid norms built on them.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "obstacle/exponents.hpp"
#include "obstacle/grid.hpp"
#include "obstacle/norms.hpp"
#include "obstacle/version.hpp"

using namespace obstacle;

TEST_CASE("line grid geometry") {
  const Grid g = Grid::line(-1.0, 1.0, 5);
  CHECK(g.dim == 1);
  CHECK(g.size() == 5);
  CHECK(g.h[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.coord(0)[0] == -1.0);
  CHECK(g.coord(4)[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.coord(2)[1] == 0.0);
  CHECK(g.is_boundary(0));
  CHECK(g.is_boundary(4));
  CHECK(g.is_interior(1));
  CHECK(g.is_interior(3));
  CHECK(g.cell_volume() == g.h[0]);
  CHECK(g.min_spacing() == g.h[0]);
  CHECK(g.extent(0) == doctest::Approx(2.0));
}

TEST_CASE("box grid flat/multi round trip and row-major order") {
  const Grid g = Grid::box(0.0, 1.0, 4, -2.0, 2.0, 5);
  CHECK(g.dim == 2);
  CHECK(g.size() == 20);
  CHECK(g.h[0] == doctest::Approx(1.0 / 3.0));
  CHECK(g.h[1] == doctest::Approx(1.0));
  // last axis fastest
  CHECK(g.flat(0, 0) == 0);
  CHECK(g.flat(0, 1) == 1);
  CHECK(g.flat(1, 0) == 5);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto ij = g.multi(k);
    CHECK(g.flat(ij[0], ij[1]) == k);
  }
  const auto x = g.coord(g.flat(2, 3));
  CHECK(x[0] == doctest::Approx(2.0 / 3.0));
  CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("boundary classification covers exactly the outer ring") {
  const Grid g = Grid::box(0.0, 1.0, 6, 0.0, 1.0, 4);
  std::size_t nb = 0;
  for (std::size_t k = 0; k < g.size(); ++k) nb += g.is_boundary(k);
  // ring of a 6x4 lattice: total minus the (6-2)x(4-2) interior block
  CHECK(nb == 6 * 4 - 4 * 2);
  CHECK(boundary_nodes(g).size() == nb);
  CHECK(interior_nodes(g).size() == 4 * 2);
  CHECK(all_nodes(g).size() == g.size());
}

TEST_CASE("boundary distance is the min axis gap") {
  const Grid g1 = Grid::line(0.0, 1.0, 5);
  CHECK(g1.boundary_distance(0) == 0.0);
  CHECK(g1.boundary_distance(1) == doctest::Approx(0.25));
  CHECK(g1.boundary_distance(2) == doctest::Approx(0.5));
  const Grid g2 = Grid::box(0.0, 1.0, 5, 0.0, 2.0, 5);
  // node (1,2): 0.25 from the x1 boundary, 1.0 from the x2 boundary
  CHECK(g2.boundary_distance(g2.flat(1, 2)) == doctest::Approx(0.25));
  CHECK(g2.boundary_distance(g2.flat(2, 2)) == doctest::Approx(0.5));
}

TEST_CASE("scalar field statistics") {
  const Grid g = Grid::line(0.0, 1.0, 4);
  ScalarField u(g, 0.0);
  u[0] = -3.0;
  u[1] = 2.0;
  u[2] = 0.5;
  u[3] = -0.5;
  CHECK(u.sup_norm() == 3.0);
  CHECK(u.max_value() == 2.0);
  CHECK(u.min_value() == -3.0);
  CHECK(u.all_finite());
  u[2] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(u.all_finite());
}

TEST_CASE("field_from evaluates at node coordinates") {
  const Grid g = Grid::box(-1.0, 1.0, 3, -1.0, 1.0, 3);
  const ScalarField u = field_from(g, [](double x, double y) { return x + 10.0 * y; });
  CHECK(u[g.flat(0, 0)] == doctest::Approx(-11.0));
  CHECK(u[g.flat(2, 1)] == doctest::Approx(1.0));
  CHECK(u[g.flat(1, 2)] == doctest::Approx(10.0));
}

TEST_CASE("sup_distance and its grid mismatch guard") {
  const Grid g = Grid::line(0.0, 1.0, 9);
  const ScalarField a = field_from(g, [](double x, double) { return x; });
  const ScalarField b = field_from(g, [](double x, double) { return x * x; });
  // max of x - x^2 on the lattice; attained at x = 0.5
  CHECK(sup_distance(a, b) == doctest::Approx(0.25));
  const ScalarField c{Grid::line(0.0, 1.0, 5), {}};
  CHECK_THROWS_AS((void)sup_distance(a, c), std::invalid_argument);
}

TEST_CASE("ball_nodes matches the brute-force characterization") {
  const Grid g = Grid::box(-1.0, 1.0, 9, -1.0, 1.0, 9);
  const std::array<double, 2> c{0.1, -0.2};
  const double r = 0.6;
  const Region ball = ball_nodes(g, c, r);
  std::vector<char> in(g.size(), 0);
  for (std::size_t k : ball) in[k] = 1;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.coord(k);
    const double d = std::hypot(x[0] - c[0], x[1] - c[1]);
    CHECK(static_cast<bool>(in[k]) == (d <= r));
  }
  CHECK_THROWS_AS((void)ball_nodes(g, c, 0.0), std::invalid_argument);
}

TEST_CASE("margin_nodes shrinks with the margin") {
  const Grid g = Grid::line(0.0, 1.0, 11);
  CHECK(margin_nodes(g, 0.05).size() == 9);   // strictly inside by one step
  CHECK(margin_nodes(g, 0.25).size() == 5);   // x in {0.3, ..., 0.7} remain
  CHECK(margin_nodes(g, 0.45).size() == 1);
  CHECK(margin_nodes(g, 0.55).empty());
}

TEST_CASE("exponent bookkeeping in the subcritical range") {
  // alpha0 = 2 - n/min(p,n); with n = 1, p >= 1 gives alpha0 = 1
  const ExponentSet e1 = compute_exponents(1, 4.0, 4.0, 0.5);
  CHECK(e1.alpha0 == doctest::Approx(1.0));
  REQUIRE(e1.beta0.has_value());
  CHECK(*e1.beta0 == doctest::Approx(1.0 - 1.0 / 4.0));
  REQUIRE(e1.beta2.has_value());
  CHECK(*e1.beta2 == doctest::Approx(0.5)); // min(0.75, 0.5)

  // n = 2, p < n: alpha0 = 2 - 2/p, no beta0
  const ExponentSet e2 = compute_exponents(2, 1.5, 3.0, 0.5);
  CHECK(e2.alpha0 == doctest::Approx(2.0 - 2.0 / 1.5));
  CHECK_FALSE(e2.beta0.has_value());
  CHECK_FALSE(e2.beta2.has_value());

  // p slightly above n/2 still admissible
  const ExponentSet e3 = compute_exponents(1, 0.75, 1.5, 0.5);
  CHECK(e3.alpha0 == doctest::Approx(2.0 - 1.0 / 0.75));
}

TEST_CASE("exponent validation names the violated constraint") {
  CHECK_THROWS_AS((void)compute_exponents(1, 4.0, 2.0, 0.5), std::invalid_argument); // p > q
  CHECK_THROWS_AS((void)compute_exponents(2, 2.0, 2.0, 0.5), std::invalid_argument); // q <= n
  CHECK_THROWS_AS((void)compute_exponents(2, 1.0, 4.0, 0.5), std::invalid_argument); // p <= n/2
  CHECK_THROWS_AS((void)compute_exponents(1, 2.0, 4.0, 0.0), std::invalid_argument); // beta1 low
  CHECK_THROWS_AS((void)compute_exponents(1, 2.0, 4.0, 1.0), std::invalid_argument); // beta1 high
}

TEST_CASE("lp_quasinorm is the cell-volume weighted lattice norm") {
  const Grid g = Grid::line(0.0, 1.0, 5); // h = 0.25
  ScalarField u(g, 2.0);
  const Region all = all_nodes(g);
  // (sum |2|^p h)^(1/p) = 2 * (5 * 0.25)^(1/p)
  CHECK(lp_quasinorm(u, 2.0, all) == doctest::Approx(2.0 * std::sqrt(1.25)));
  CHECK(lp_quasinorm(u, 1.0, all) == doctest::Approx(2.5));
  // quasinorm range p < 1 follows the same formula
  CHECK(lp_quasinorm(u, 0.5, all) == doctest::Approx(2.0 * std::pow(1.25, 2.0)));
  // single-node region isolates the cell volume factor
  CHECK(lp_quasinorm(u, 3.0, Region{2}) == doctest::Approx(2.0 * std::pow(0.25, 1.0 / 3.0)));
}

TEST_CASE("lp_quasinorm scales with the grid spacing") {
  const Grid fine = Grid::line(0.0, 1.0, 9);
  const Grid coarse = Grid::line(0.0, 2.0, 9);
  ScalarField uf(fine, 1.0), uc(coarse, 1.0);
  const double nf = lp_quasinorm(uf, 2.0, all_nodes(fine));
  const double nc = lp_quasinorm(uc, 2.0, all_nodes(coarse));
  // same nodal values, doubled cell volume: ratio 2^(1/p)
  CHECK(nc / nf == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("lp_quasinorm rejects empty regions and bad exponents") {
  const Grid g = Grid::line(0.0, 1.0, 5);
  ScalarField u(g, 1.0);
  CHECK_THROWS_AS((void)lp_quasinorm(u, 2.0, Region{}), std::invalid_argument);
  CHECK_THROWS_AS((void)lp_quasinorm(u, 0.0, all_nodes(g)), std::invalid_argument);
  CHECK_THROWS_AS((void)lp_quasinorm(u, -1.0, all_nodes(g)), std::invalid_argument);
}

TEST_CASE("quasinorm triangle inequality with constant 2^(1/p-1)") {
  const Grid g = Grid::line(0.0, 1.0, 33);
  const ScalarField a = field_from(g, [](double x, double) { return std::sin(7 * x); });
  const ScalarField b = field_from(g, [](double x, double) { return x * x - 0.3; });
  ScalarField s(g);
  for (std::size_t k = 0; k < g.size(); ++k) s[k] = a[k] + b[k];
  const Region all = all_nodes(g);
  for (double p : {0.5, 0.75, 1.0, 2.0}) {
    const double lhs = lp_quasinorm(s, p, all);
    const double cp = p >= 1.0 ? 1.0 : std::pow(2.0, 1.0 / p - 1.0);
    const double rhs = cp * (lp_quasinorm(a, p, all) + lp_quasinorm(b, p, all));
    CHECK(lhs <= rhs * (1 + 1e-12));
  }
}

TEST_CASE("sample_modulus exact pair scan on a small grid") {
  const Grid g = Grid::line(0.0, 1.0, 5); // nodes at 0, .25, .5, .75, 1
  const ScalarField phi = field_from(g, [](double x, double) { return 2.0 * x; });
  const ScalarField psi = field_from(g, [](double x, double) { return -x; });
  const auto mod = sample_modulus(phi, psi, {0.25, 0.5, 1.0});
  REQUIRE(mod.size() == 3);
  // phi has the larger slope, so it realizes every supremum: 2 * r
  CHECK(mod[0].first == 0.25);
  CHECK(mod[0].second == doctest::Approx(0.5));
  CHECK(mod[1].second == doctest::Approx(1.0));
  CHECK(mod[2].second == doctest::Approx(2.0));
}

TEST_CASE("sample_modulus is monotone in the radius and takes the pair max") {
  const Grid g = Grid::box(-1.0, 1.0, 9, -1.0, 1.0, 9);
  const ScalarField phi = field_from(g, [](double x, double y) { return std::abs(x) + y; });
  const ScalarField psi = field_from(g, [](double x, double y) { return 3.0 * x * y; });
  const auto mod = sample_modulus(phi, psi, {0.25, 0.5, 1.0, 2.0, 3.0});
  for (std::size_t i = 1; i < mod.size(); ++i) CHECK(mod[i].second >= mod[i - 1].second);
  // at full diameter the modulus is the larger total oscillation of the two
  const double osc_phi = phi.max_value() - phi.min_value();
  const double osc_psi = psi.max_value() - psi.min_value();
  CHECK(mod.back().second == doctest::Approx(std::max(osc_phi, osc_psi)));
  CHECK_THROWS_AS((void)sample_modulus(phi, psi, {0.0}), std::invalid_argument);
}

TEST_CASE("sample_modulus windowed fallback stays consistent on large grids") {
  // monotone along the axis, so axis-aligned windows realize the true sup
  const Grid big = Grid::line(0.0, 1.0, 20001); // above the exact-scan limit
  const ScalarField phi = field_from(big, [](double x, double) { return x * x; });
  const ScalarField psi(big, 0.0);
  const auto mod = sample_modulus(phi, psi, {0.1});
  // sup over |x-y| <= 0.1 of |x^2-y^2| = 1 - 0.9^2
  CHECK(mod[0].second == doctest::Approx(1.0 - 0.81).epsilon(1e-3));
}

TEST_CASE("version string is wired") {
  CHECK(std::string(kVersion) == "0.1.0");
}
