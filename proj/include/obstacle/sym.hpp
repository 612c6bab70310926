#pragma once

#include <array>

namespace obstacle {

// Symmetric 1x1 or 2x2 matrix, upper triangle stored, so symmetry is exact
// by construction.  Hessian arguments of the operators live here.
struct SymMatrix {
  int n = 1;
  double a11 = 0.0;
  double a12 = 0.0; // unused for n == 1
  double a22 = 0.0; // unused for n == 1

  static SymMatrix make1(double a) { return {1, a, 0.0, 0.0}; }
  static SymMatrix make2(double a11, double a12, double a22) {
    return {2, a11, a12, a22};
  }
  static SymMatrix zero(int n) { return {n, 0.0, 0.0, 0.0}; }
  static SymMatrix identity(int n) { return {n, 1.0, 0.0, n == 2 ? 1.0 : 0.0}; }

  double trace() const { return n == 1 ? a11 : a11 + a22; }

  // Eigenvalues in ascending order (second entry unused for n == 1).
  // Closed-form quadratic solve; the discriminant is clamped at zero so
  // rounding can never produce a NaN on nearly defective input.
  std::array<double, 2> eigenvalues() const;

  // Spectral norm, max |eigenvalue|.
  double norm() const;

  // Quadratic form d' X d for a direction (dx, dy).
  double quad(double dx, double dy) const {
    if (n == 1) return a11 * dx * dx;
    return a11 * dx * dx + 2.0 * a12 * dx * dy + a22 * dy * dy;
  }

  SymMatrix operator+(const SymMatrix& o) const {
    return {n, a11 + o.a11, a12 + o.a12, a22 + o.a22};
  }
  SymMatrix operator-(const SymMatrix& o) const {
    return {n, a11 - o.a11, a12 - o.a12, a22 - o.a22};
  }
  SymMatrix operator-() const { return {n, -a11, -a12, -a22}; }
  SymMatrix operator*(double t) const { return {n, t * a11, t * a12, t * a22}; }
};

enum class PucciSign { Plus, Minus };

// Extremal operator over the ellipticity class [lambda, Lambda]:
//   Plus:  max over admissible A of -Tr(A X) = Lambda*sum(e_i^-) - lambda*sum(e_i^+)
//   Minus: min over admissible A of -Tr(A X) = lambda*sum(e_i^-) - Lambda*sum(e_i^+)
// where e_i are the eigenvalues of X.  Satisfies the exact duality
// Minus(X) = -Plus(-X).
double pucci_extremal(PucciSign sign, const SymMatrix& X, double lambda,
                      double Lambda);

} // namespace obstacle
