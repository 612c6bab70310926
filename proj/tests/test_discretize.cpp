// Discretization layer: directional stencils, monotone operator rows,
// residual assembly, mollified data, and the direct linear-system paths.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "obstacle/grid.hpp"
#include "obstacle/linear_system.hpp"
#include "obstacle/mollifier.hpp"
#include "obstacle/norms.hpp"
#include "obstacle/operator_spec.hpp"
#include "obstacle/problem.hpp"
#include "obstacle/residual.hpp"
#include "obstacle/stencil.hpp"

using namespace obstacle;

namespace {

LinearCoefficients constant_coeffs(const Grid& g, double a11, double a12,
                                   double a22, double b1, double b2) {
  LinearCoefficients c;
  c.a11 = ScalarField(g, a11);
  c.a12 = ScalarField(g, a12);
  c.a22 = ScalarField(g, a22);
  c.b1 = ScalarField(g, b1);
  c.b2 = ScalarField(g, b2);
  return c;
}

ProblemSpec toy_problem(const Grid& g, OperatorSpec op, ScalarField f) {
  const ScalarField phi(g, -1000.0), psi(g, 1000.0), bc(g, 0.0);
  return make_problem(g, std::move(op), std::move(f), phi, psi, bc,
                      compute_exponents(g.dim, 4.0, 4.0, 0.5));
}

} // namespace

TEST_CASE("directional second differences are exact on quadratics") {
  const Grid g = Grid::box(-1.0, 1.0, 9, -1.0, 1.0, 9); // square spacing
  const ScalarField q = field_from(g, [](double x, double y) {
    return 2.0 * x * x - y * y + x * y + 3.0 * x - y + 0.5;
  });
  // Hessian [[4, 1], [1, -2]]; unit-direction second derivatives:
  //   axes: 4 and -2; diagonals (1,+-1)/sqrt(2): (4 - 2 +- 2*1)/2
  const std::size_t c = g.flat(4, 4);
  CHECK(directional_second_difference(q, c, StencilDirection::Axis1) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(directional_second_difference(q, c, StencilDirection::Axis2) ==
        doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(directional_second_difference(q, c, StencilDirection::DiagUp) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(directional_second_difference(q, c, StencilDirection::DiagDown) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("stencil neighbor checks and missing-neighbor guard") {
  const Grid g = Grid::box(0.0, 1.0, 4, 0.0, 1.0, 4);
  CHECK(has_stencil_neighbors(g, g.flat(1, 1), StencilDirection::Axis1));
  CHECK(has_stencil_neighbors(g, g.flat(1, 1), StencilDirection::DiagUp));
  CHECK_FALSE(has_stencil_neighbors(g, g.flat(0, 1), StencilDirection::Axis1));
  CHECK_FALSE(has_stencil_neighbors(g, g.flat(1, 0), StencilDirection::DiagDown));
  const ScalarField u(g, 0.0);
  CHECK_THROWS_AS(
      (void)directional_second_difference(u, g.flat(0, 1), StencilDirection::Axis1),
      std::invalid_argument);
}

TEST_CASE("discretizability rejections") {
  const Grid square = Grid::box(0.0, 1.0, 5, 0.0, 1.0, 5);
  const Grid stretched = Grid::box(0.0, 1.0, 5, 0.0, 2.0, 5);

  // cross term beyond diagonal dominance
  CHECK_THROWS_AS(validate_discretizable(OperatorSpec::linear(
                      square, constant_coeffs(square, 1.0, 1.5, 1.0, 0, 0),
                      0.1, 3.0), square),
                  std::invalid_argument);
  // cross term on non-square spacing needs the diagonal stencil
  CHECK_THROWS_AS(validate_discretizable(OperatorSpec::linear(
                      stretched, constant_coeffs(stretched, 1.0, 0.5, 1.0, 0, 0),
                      0.1, 3.0), stretched),
                  std::invalid_argument);
  // extremal families also need square spacing in 2D
  CHECK_THROWS_AS(validate_discretizable(
                      OperatorSpec::pucci_plus(stretched, 1.0, 2.0,
                                               ScalarField(stretched, 0.0)),
                      stretched),
                  std::invalid_argument);
  // custom without a supplied discrete form
  CHECK_THROWS_AS(validate_discretizable(
                      OperatorSpec::custom(square, 1.0, 2.0, ScalarField(square, 0.0),
                                           [](const std::array<double, 2>&,
                                              const std::array<double, 2>&,
                                              const SymMatrix& X) { return -X.trace(); }),
                      square),
                  std::invalid_argument);

  // the well-posed variants all pass
  validate_discretizable(OperatorSpec::linear(
      square, constant_coeffs(square, 1.0, 0.5, 1.0, 0.2, -0.1), 0.1, 3.0), square);
  validate_discretizable(OperatorSpec::linear(
      stretched, constant_coeffs(stretched, 1.0, 0.0, 1.0, 0, 0), 0.1, 3.0), stretched);
  validate_discretizable(
      OperatorSpec::pucci_minus(square, 1.0, 2.0, ScalarField(square, 0.1)), square);
}

TEST_CASE("cross-term decomposition is exact on x1*x2 for both signs") {
  const Grid g = Grid::box(-1.0, 1.0, 9, -1.0, 1.0, 9);
  const ScalarField u = field_from(g, [](double x, double y) { return x * y; });
  const std::size_t c = g.flat(4, 4);
  for (double a12 : {0.5, -0.5}) {
    const OperatorSpec op = OperatorSpec::linear(
        g, constant_coeffs(g, 1.0, a12, 1.0, 0.0, 0.0), 0.1, 3.0);
    // -Tr(A D2u) with D2u = [[0,1],[1,0]] is -2*a12
    CHECK(discretize_operator(op, u, c) == doctest::Approx(-2.0 * a12).epsilon(1e-12));
  }
}

TEST_CASE("drift terms are exact on linear fields for both drift signs") {
  const Grid g = Grid::box(-1.0, 1.0, 9, -1.0, 1.0, 9);
  const ScalarField u = field_from(g, [](double x, double y) { return 3.0 * x - 2.0 * y; });
  const std::size_t c = g.flat(4, 4);
  for (double b1 : {1.5, -1.5}) {
    for (double b2 : {0.7, -0.7}) {
      const OperatorSpec op = OperatorSpec::linear(
          g, constant_coeffs(g, 1.0, 0.0, 1.0, b1, b2), 0.1, 3.0);
      // second differences of a linear field vanish; one-sided first
      // differences are exact on it
      CHECK(discretize_operator(op, u, c) ==
            doctest::Approx(3.0 * b1 - 2.0 * b2).epsilon(1e-12));
    }
  }
}

TEST_CASE("extremal discretization consistency with the pointwise operator") {
  // on a field whose axis curvatures have opposite signs the extremal value
  // assigns different weights per direction; compare against the pointwise
  // operator applied to the finite-difference Hessian diagonal
  const Grid g = Grid::box(-1.0, 1.0, 17, -1.0, 1.0, 17);
  const ScalarField u = field_from(g, [](double x, double y) { return x * x - 2.0 * y * y; });
  const OperatorSpec op = OperatorSpec::pucci_plus(g, 1.0, 2.0, ScalarField(g, 0.0));
  const std::size_t c = g.flat(8, 8);
  // axis second differences are exactly 2 and -4; the gradient vanishes at
  // the center; P+(diag(2,-4)) = 2*4 - 1*2
  CHECK(discretize_operator(op, u, c) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("monotonicity: raising one neighbor never raises the operator value elsewhere") {
  const Grid g = Grid::box(-1.0, 1.0, 9, -1.0, 1.0, 9);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> val(-1.0, 1.0), bump(0.01, 1.0);

  std::vector<OperatorSpec> specs;
  specs.push_back(OperatorSpec::linear(
      g, constant_coeffs(g, 1.0, 0.4, 1.0, 0.5, -0.3), 0.1, 3.0));
  specs.push_back(OperatorSpec::bellman_max(
      g,
      {constant_coeffs(g, 1.0, 0.0, 2.0, 0.1, 0.0),
       constant_coeffs(g, 1.8, 0.2, 1.2, 0.0, -0.2)},
      1.0, 2.0));
  specs.push_back(OperatorSpec::pucci_plus(g, 1.0, 2.0, ScalarField(g, 0.2)));
  specs.push_back(OperatorSpec::pucci_minus(g, 1.0, 2.0, ScalarField(g, 0.2)));

  const Region interior = interior_nodes(g);
  for (const OperatorSpec& spec : specs) {
    for (int trial = 0; trial < 250; ++trial) {
      ScalarField u(g);
      for (std::size_t k = 0; k < g.size(); ++k) u[k] = val(rng);
      const std::size_t target =
          interior[rng() % interior.size()];
      ScalarField up = u;
      up[target] += bump(rng);
      for (std::size_t x : interior) {
        if (x == target) continue;
        const double before = discretize_operator(spec, u, x);
        const double after = discretize_operator(spec, up, x);
        const double slack = 1e-10 * (1.0 + std::abs(before));
        CHECK(after <= before + slack);
      }
    }
  }
}

TEST_CASE("frozen rows reproduce the operator value and are monotone") {
  const Grid g = Grid::box(-1.0, 1.0, 9, -1.0, 1.0, 9);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> val(-1.0, 1.0);

  std::vector<OperatorSpec> specs;
  specs.push_back(OperatorSpec::linear(
      g, constant_coeffs(g, 1.0, -0.4, 1.0, 0.5, 0.3), 0.1, 3.0));
  specs.push_back(OperatorSpec::pucci_plus(g, 1.0, 2.0, ScalarField(g, 0.2)));
  specs.push_back(OperatorSpec::bellman_max(
      g,
      {constant_coeffs(g, 1.0, 0.0, 2.0, 0.1, 0.0),
       constant_coeffs(g, 1.8, 0.2, 1.2, 0.0, -0.2)},
      1.0, 2.0));

  for (const OperatorSpec& spec : specs) {
    for (int trial = 0; trial < 40; ++trial) {
      ScalarField u(g);
      for (std::size_t k = 0; k < g.size(); ++k) u[k] = val(rng);
      for (std::size_t x : interior_nodes(g)) {
        const FrozenRow row = freeze_row(spec, u, x);
        const double direct = discretize_operator(spec, u, x);
        CHECK(row.apply(u, x) == doctest::Approx(direct).epsilon(1e-12));
        CHECK(row.diag >= 0.0);
        for (int i = 0; i < row.noff; ++i) CHECK(row.off[i].second <= 0.0);
        // refreezing at the same iterate picks the same branches
        CHECK(freeze_row(spec, u, x).signature == row.signature);
        CHECK(row_scale(row) >=
              std::abs(row.diag)); // scale dominates the diagonal
      }
    }
  }
}

TEST_CASE("row scale of the 1D second difference") {
  const Grid g = Grid::line(0.0, 1.0, 11); // h = 0.1
  const OperatorSpec op = OperatorSpec::linear(
      g, constant_coeffs(g, 1.0, 0.0, 0.0, 0.0, 0.0), 1.0, 1.0);
  const ScalarField u(g, 0.0);
  const FrozenRow row = freeze_row(op, u, 5);
  // -u'' row: diag 2/h^2, two neighbors at -1/h^2
  CHECK(row_scale(row) == doctest::Approx(4.0 / (0.1 * 0.1)).epsilon(1e-12));
}

TEST_CASE("residual assembly follows the three-regime form") {
  const Grid g = Grid::line(0.0, 1.0, 5);
  const OperatorSpec op = OperatorSpec::linear(
      g, constant_coeffs(g, 1.0, 0.0, 0.0, 0.0, 0.0), 1.0, 1.0);
  ScalarField f(g, 0.0), phi(g, -0.5), psi(g, 0.5), bc(g, 0.2);
  ProblemSpec prob = make_problem(g, op, f, phi, psi, bc,
                                  compute_exponents(1, 4.0, 4.0, 0.5));
  ScalarField u(g);
  u[0] = 0.1; u[1] = -0.6; u[2] = 0.0; u[3] = 0.7; u[4] = -0.3;
  const ScalarField r = assemble_residual(prob, u);
  // boundary rows: u - g
  CHECK(r[0] == doctest::Approx(0.1 - 0.2));
  CHECK(r[4] == doctest::Approx(-0.3 - 0.2));
  for (std::size_t k : interior_nodes(g)) {
    const double Fh = discretize_operator(prob.op, u, k);
    const double expect =
        std::min(std::max(Fh - f[k], u[k] - psi[k]), u[k] - phi[k]);
    CHECK(r[k] == doctest::Approx(expect).epsilon(1e-13));
  }
  // node 1: the dip makes the second difference large and negative, so the
  // inner max falls to u - psi = -1.1, below the lower branch u - phi
  CHECK(r[1] == doctest::Approx(-1.1));
}

TEST_CASE("penalized residual and penalty magnitude") {
  const Grid g = Grid::line(0.0, 1.0, 9);
  const OperatorSpec op = OperatorSpec::linear(
      g, constant_coeffs(g, 1.0, 0.0, 0.0, 0.0, 0.0), 1.0, 1.0);
  ScalarField f(g, 1.0), phi(g, -0.1), psi(g, 0.1), bc(g, 0.0);
  ProblemSpec prob = make_problem(g, op, f, phi, psi, bc,
                                  compute_exponents(1, 4.0, 4.0, 0.5));
  const MollifiedData data = prepare_mollified(prob, 0.0);
  CHECK(data.identity);
  const double delta = 0.25;
  const ScalarField u = field_from(g, [](double x, double) { return 0.3 * x - 0.15; });
  const ScalarField pr = assemble_penalized_residual(prob, data, delta, u);
  for (std::size_t k : interior_nodes(g)) {
    const double Fh = discretize_operator(prob.op, u, k);
    const double up = std::max(u[k] - data.psi_eps[k], 0.0);
    const double lo = std::max(data.phi_eps[k] - u[k], 0.0);
    CHECK(pr[k] == doctest::Approx(Fh + up / delta - lo / delta - data.f[k])
                       .epsilon(1e-13));
  }
  CHECK(pr[0] == doctest::Approx(u[0] - 0.0));
  // sup of the penalty terms: worst escape is |0.15 - 0.1| = 0.05 at the ends
  CHECK(penalty_sup(data, delta, u) == doctest::Approx(0.05 / delta).epsilon(1e-12));
}

TEST_CASE("mollifier kernels have unit mass and collapse below the spacing") {
  const Grid g = Grid::line(0.0, 1.0, 101); // h = 0.01
  const MollifierKernel k = build_mollifier(g, 0.05);
  CHECK_FALSE(k.identity);
  CHECK(k.K1 >= 1);
  double mass = 0.0;
  for (double w : k.w1) {
    CHECK(w >= 0.0);
    mass += w;
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
  // symmetric weights
  for (int i = 0; i <= k.K1; ++i)
    CHECK(k.w1[k.K1 - i] == doctest::Approx(k.w1[k.K1 + i]).epsilon(1e-14));

  CHECK(build_mollifier(g, 0.001).identity);
  CHECK(build_mollifier(g, 0.0).identity);
}

TEST_CASE("mollification fixes constants and interior linear profiles") {
  const Grid g = Grid::line(0.0, 1.0, 101);
  const ScalarField cons(g, 3.5);
  const MollifyResult mc = mollify(cons, 0.05, Extension::Nearest);
  CHECK(sup_distance(mc.field, cons) <= 1e-13);

  const ScalarField lin = field_from(g, [](double x, double) { return 2.0 * x - 1.0; });
  const MollifyResult ml = mollify(lin, 0.05, Extension::Nearest);
  // symmetric averaging is exact on linear data away from the boundary
  for (std::size_t k : margin_nodes(g, 0.06))
    CHECK(ml.field[k] == doctest::Approx(lin[k]).epsilon(1e-12));

  // zero extension pulls values toward zero near the edge
  const MollifyResult mz = mollify(cons, 0.05, Extension::Zero);
  CHECK(mz.field[0] < 3.5);
  CHECK(mz.field[50] == doctest::Approx(3.5).epsilon(1e-13));

  const MollifyResult id = mollify(cons, 0.0, Extension::Nearest);
  CHECK(id.identity_fallback);
}

TEST_CASE("obstacle shift keeps the sandwich ordering") {
  const Grid g = Grid::line(-1.0, 1.0, 201);
  const ScalarField phi = field_from(g, [](double x, double) { return std::sin(3.0 * x); });
  ScalarField psi(g);
  for (std::size_t k = 0; k < g.size(); ++k) psi[k] = phi[k] + 0.4;
  const double eps = 0.05;
  const auto modulus = sample_modulus(phi, psi, {eps});
  const auto [phi_eps, psi_eps] = shift_obstacles(phi, psi, eps, modulus);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(phi_eps[k] <= phi[k] + 1e-13);
    CHECK(psi[k] <= psi_eps[k] + 1e-13);
  }

  // an understated modulus cannot absorb the smoothing of a kink
  const ScalarField kink = field_from(g, [](double x, double) { return std::abs(x); });
  ScalarField above(g);
  for (std::size_t k = 0; k < g.size(); ++k) above[k] = kink[k] + 1.0;
  CHECK_THROWS_AS((void)shift_obstacles(kink, above, eps, {{eps, 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("mollified problem data stays ordered and extends f by zero") {
  const Grid g = Grid::line(-1.0, 1.0, 201);
  const OperatorSpec op = OperatorSpec::linear(
      g, constant_coeffs(g, 1.0, 0.0, 0.0, 0.0, 0.0), 1.0, 1.0);
  const ScalarField f(g, 2.0);
  const ScalarField phi = field_from(g, [](double x, double) { return -0.2 - x * x; });
  const ScalarField psi = field_from(g, [](double x, double) { return 0.2 + x * x; });
  const ScalarField bc(g, 0.0);
  ProblemSpec prob = make_problem(g, op, f, phi, psi, bc,
                                  compute_exponents(1, 4.0, 4.0, 0.5));
  const MollifiedData data = prepare_mollified(prob, 0.05);
  CHECK_FALSE(data.identity);
  CHECK(data.eps == 0.05);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(data.phi_eps[k] <= phi[k] + 1e-13);
    CHECK(psi[k] <= data.psi_eps[k] + 1e-13);
  }
  // zero extension: the center keeps f, the boundary node is averaged down
  CHECK(data.f[100] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(data.f[0] < 2.0);
}

TEST_CASE("tridiagonal elimination solves a known system") {
  const int n = 50;
  std::vector<double> sub(n, -1.0), diag(n, 2.0), sup(n, -1.0);
  // manufacture rhs from a known solution
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& xi : x) xi = val(rng);
  std::vector<double> rhs(n, 0.0);
  for (int i = 0; i < n; ++i) {
    rhs[i] = 2.0 * x[i];
    if (i > 0) rhs[i] -= x[i - 1];
    if (i + 1 < n) rhs[i] -= x[i + 1];
  }
  const std::vector<double> got = solve_tridiagonal(sub, diag, sup, rhs);
  for (int i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(x[i]).epsilon(1e-11));

  CHECK_THROWS_AS((void)solve_tridiagonal({0.0, -1}, {0.0, 2}, {-1, 0.0}, {1, 1}),
                  std::runtime_error);
}

TEST_CASE("assembled rows solve identically through both direct paths") {
  // a 1D reaction-diffusion row set is tridiagonal, so it can go through
  // either elimination; the answers must agree
  const int n = 40;
  std::vector<RowData> rows(n);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> val(0.5, 2.0);
  for (int i = 0; i < n; ++i) {
    rows[i].diag = 2.0 + val(rng);
    rows[i].rhs = val(rng) - 1.2;
    if (i > 0) rows[i].add(i - 1, -1.0);
    if (i + 1 < n) rows[i].add(i + 1, -1.0);
  }
  const std::vector<double> a = solve_rows(rows, true);
  const std::vector<double> b = solve_rows(rows, false);
  REQUIRE(a.size() == b.size());
  for (int i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));

  // residual check: A x = rhs
  for (int i = 0; i < n; ++i) {
    double r = rows[i].diag * a[i] - rows[i].rhs;
    for (int j = 0; j < rows[i].noff; ++j)
      r += rows[i].off[j].second * a[rows[i].off[j].first];
    CHECK(std::abs(r) <= 1e-12);
  }

  std::vector<RowData> singular(2);
  singular[0].diag = 1.0;
  singular[0].add(1, -1.0);
  singular[1].diag = 1.0;
  singular[1].add(0, -1.0);
  CHECK_THROWS_AS((void)solve_rows(singular, false), std::runtime_error);
}

TEST_CASE("row accumulation merges duplicate columns") {
  RowData r;
  r.add(3, -1.0);
  r.add(5, -2.0);
  r.add(3, -0.5);
  CHECK(r.noff == 2);
  CHECK(r.off[0].first == 3);
  CHECK(r.off[0].second == doctest::Approx(-1.5));
  r.add(7, 0.0); // zero coefficients are dropped
  CHECK(r.noff == 2);
}
