#include "obstacle/operator_spec.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace obstacle {

namespace {

void check_ellipticity(double lambda, double Lambda) {
  if (!(lambda > 0) || !(lambda <= Lambda))
    throw std::invalid_argument("operator: need 0 < lambda <= Lambda");
}

void check_member(const Grid& g, const LinearCoefficients& c) {
  if (c.a11.grid != g || c.b1.grid != g)
    throw std::invalid_argument("operator: coefficient field on wrong grid");
  if (g.dim == 2 && (c.a12.grid != g || c.a22.grid != g || c.b2.grid != g))
    throw std::invalid_argument("operator: coefficient field on wrong grid");
}

// Magnitude of b(x), the sharp gradient bound of a linear member.
ScalarField default_mu(const Grid& g,
                       const std::vector<LinearCoefficients>& members) {
  ScalarField mu(g, 0.0);
  for (const auto& c : members)
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double b1 = c.b1.v[k];
      const double b2 = g.dim == 2 ? c.b2.v[k] : 0.0;
      mu.v[k] = std::max(mu.v[k], std::hypot(b1, b2));
    }
  return mu;
}

} // namespace

OperatorSpec OperatorSpec::linear(const Grid& g, LinearCoefficients coeffs,
                                  double lambda, double Lambda) {
  check_ellipticity(lambda, Lambda);
  check_member(g, coeffs);
  OperatorSpec s;
  s.family = OperatorFamily::Linear;
  s.dim = g.dim;
  s.lambda = lambda;
  s.Lambda = Lambda;
  s.members.push_back(std::move(coeffs));
  s.mu = default_mu(g, s.members);
  return s;
}

OperatorSpec OperatorSpec::bellman_max(const Grid& g,
                                       std::vector<LinearCoefficients> coeffs,
                                       double lambda, double Lambda) {
  check_ellipticity(lambda, Lambda);
  if (coeffs.empty())
    throw std::invalid_argument("operator: bellman_max needs at least one member");
  for (const auto& c : coeffs) check_member(g, c);
  OperatorSpec s;
  s.family = OperatorFamily::BellmanMax;
  s.dim = g.dim;
  s.lambda = lambda;
  s.Lambda = Lambda;
  s.members = std::move(coeffs);
  s.mu = default_mu(g, s.members);
  return s;
}

OperatorSpec OperatorSpec::pucci_plus(const Grid& g, double lambda,
                                      double Lambda, ScalarField mu) {
  check_ellipticity(lambda, Lambda);
  if (mu.grid != g)
    throw std::invalid_argument("operator: mu field on wrong grid");
  for (double m : mu.v)
    if (!(m >= 0)) throw std::invalid_argument("operator: mu must be >= 0");
  OperatorSpec s;
  s.family = OperatorFamily::PucciPlusGradient;
  s.dim = g.dim;
  s.lambda = lambda;
  s.Lambda = Lambda;
  s.mu = std::move(mu);
  return s;
}

OperatorSpec OperatorSpec::pucci_minus(const Grid& g, double lambda,
                                       double Lambda, ScalarField mu) {
  OperatorSpec s = pucci_plus(g, lambda, Lambda, std::move(mu));
  s.family = OperatorFamily::PucciMinusGradient;
  return s;
}

OperatorSpec OperatorSpec::custom(const Grid& g, double lambda, double Lambda,
                                  ScalarField mu, CustomEval eval,
                                  CustomResidual residual) {
  check_ellipticity(lambda, Lambda);
  if (mu.grid != g)
    throw std::invalid_argument("operator: mu field on wrong grid");
  if (!eval) throw std::invalid_argument("operator: custom evaluator missing");
  OperatorSpec s;
  s.family = OperatorFamily::Custom;
  s.dim = g.dim;
  s.lambda = lambda;
  s.Lambda = Lambda;
  s.mu = std::move(mu);
  s.custom_eval = std::move(eval);
  s.custom_residual = std::move(residual);
  return s;
}

namespace {

double eval_linear_member(const LinearCoefficients& c, int dim, std::size_t k,
                          const std::array<double, 2>& xi, const SymMatrix& X) {
  if (dim == 1) return -c.a11.v[k] * X.a11 + c.b1.v[k] * xi[0];
  const double tr = c.a11.v[k] * X.a11 + 2.0 * c.a12.v[k] * X.a12 +
                    c.a22.v[k] * X.a22;
  return -tr + c.b1.v[k] * xi[0] + c.b2.v[k] * xi[1];
}

} // namespace

double eval_operator(const OperatorSpec& spec, std::size_t node,
                     const std::array<double, 2>& xi, const SymMatrix& X) {
  if (X.n != spec.dim)
    throw std::invalid_argument("eval_operator: matrix dimension mismatch");
  switch (spec.family) {
    case OperatorFamily::Linear:
      return eval_linear_member(spec.members[0], spec.dim, node, xi, X);
    case OperatorFamily::BellmanMax: {
      double best = eval_linear_member(spec.members[0], spec.dim, node, xi, X);
      for (std::size_t m = 1; m < spec.members.size(); ++m)
        best = std::max(best,
                        eval_linear_member(spec.members[m], spec.dim, node, xi, X));
      return best;
    }
    case OperatorFamily::PucciPlusGradient:
      return pucci_extremal(PucciSign::Plus, X, spec.lambda, spec.Lambda) +
             spec.mu.v[node] * std::hypot(xi[0], xi[1]);
    case OperatorFamily::PucciMinusGradient:
      return pucci_extremal(PucciSign::Minus, X, spec.lambda, spec.Lambda) -
             spec.mu.v[node] * std::hypot(xi[0], xi[1]);
    case OperatorFamily::Custom:
      return spec.custom_eval(spec.mu.grid.coord(node), xi, X);
  }
  throw std::logic_error("eval_operator: unreachable");
}

MinMaxResult minmax_reduction(double A, double B, double C, TieBreak tb) {
  // Inner maximum over beta is linear, so it sits at an endpoint; the outer
  // minimum over alpha likewise.  Only the tie direction is configurable.
  int beta, alpha;
  if (tb == TieBreak::PreferPde) {
    beta = A >= B ? 1 : 0;
    const double M = std::max(A, B);
    alpha = M <= C ? 1 : 0;
  } else {
    beta = A > B ? 1 : 0;
    const double M = std::max(A, B);
    alpha = M < C ? 1 : 0;
  }
  return {std::min(std::max(A, B), C), alpha, beta};
}

} // namespace obstacle
