#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "obstacle/grid.hpp"
#include "obstacle/sym.hpp"

namespace obstacle {

enum class OperatorFamily {
  Linear,             // -Tr(A(x) X) + b(x).xi
  BellmanMax,         // max over a list of Linear members
  PucciPlusGradient,  // P+(X) + mu(x)|xi|
  PucciMinusGradient, // P-(X) - mu(x)|xi|
  Custom,             // user supplied pointwise evaluator
};

// Nodal coefficients of one linear member.  In 1D only a11 and b1 are used.
struct LinearCoefficients {
  ScalarField a11, a12, a22, b1, b2;
};

using CustomEval = std::function<double(
    const std::array<double, 2>& x, const std::array<double, 2>& xi,
    const SymMatrix& X)>;
using CustomResidual =
    std::function<double(const ScalarField& u, std::size_t node)>;

// An evaluable second-order operator F(x, xi, X) together with its declared
// ellipticity window [lambda, Lambda] and gradient coefficient bound mu.
// Built-in families are constructed through the factories below; a custom
// operator must pass check_structure_condition before a solver accepts it.
struct OperatorSpec {
  OperatorFamily family = OperatorFamily::Linear;
  int dim = 1;
  double lambda = 1.0;
  double Lambda = 1.0;
  ScalarField mu;
  std::vector<LinearCoefficients> members;
  CustomEval custom_eval;
  CustomResidual custom_residual; // optional monotone discrete form
  bool structure_checked = false;

  static OperatorSpec linear(const Grid& g, LinearCoefficients coeffs,
                             double lambda, double Lambda);
  static OperatorSpec bellman_max(const Grid& g,
                                  std::vector<LinearCoefficients> coeffs,
                                  double lambda, double Lambda);
  static OperatorSpec pucci_plus(const Grid& g, double lambda, double Lambda,
                                 ScalarField mu);
  static OperatorSpec pucci_minus(const Grid& g, double lambda, double Lambda,
                                  ScalarField mu);
  static OperatorSpec custom(const Grid& g, double lambda, double Lambda,
                             ScalarField mu, CustomEval eval,
                             CustomResidual residual = nullptr);
};

// F(x, xi, X) at a grid node.  All built-in families vanish at (xi, X) = (0, O).
double eval_operator(const OperatorSpec& spec, std::size_t node,
                     const std::array<double, 2>& xi, const SymMatrix& X);

// ---- Isaacs reduction -------------------------------------------------

// Which regime a tie favors when the game value is attained by more than one
// policy.  PreferPde resolves toward alpha=1, beta=1.
enum class TieBreak { PreferPde, PreferContact };

struct MinMaxResult {
  double value;
  int alpha; // 0 or 1; 0 selects the lower-contact branch C
  int beta;  // 0 or 1; 1 selects A over B inside the max
};

// Value and extreme-point optimizers of
//   min over alpha in [0,1] of max over beta in [0,1] of
//     alpha*beta*A + alpha*(1-beta)*B + (1-alpha)*C,
// which for this affine family equals min(max(A, B), C).
MinMaxResult minmax_reduction(double A, double B, double C,
                              TieBreak tb = TieBreak::PreferPde);

// ---- Structural checks ------------------------------------------------

struct StructureWitness {
  std::size_t node = 0;
  std::array<double, 2> xi{0, 0}, eta{0, 0};
  SymMatrix X, Y;
  double violation = 0.0;
};

struct StructureReport {
  // Largest violation of the two-sided extremal-operator bound after
  // subtracting a float evaluation slack.  <= 0 means the sampled check
  // passed; the raw value before the slack is kept alongside.
  double max_violation = 0.0;
  double max_violation_raw = 0.0;
  std::size_t samples = 0;
  StructureWitness worst;
  bool pass() const { return max_violation <= 0.0; }
};

// Samples (x, xi, eta, X, Y) tuples and checks
//   P-(X-Y) - mu(x)|xi-eta| <= F(x,xi,X) - F(x,eta,Y) <= P+(X-Y) + mu(x)|xi-eta|
// deterministically for the given seed.  A handful of structured probes
// (axis rank-one and identity differences) are always included so gross
// ellipticity mismatches cannot hide from the random draw.
StructureReport check_structure_condition(const OperatorSpec& spec,
                                          double lambda, double Lambda,
                                          const ScalarField& mu,
                                          std::size_t sample_count,
                                          std::uint64_t seed);

// ---- Coefficient continuity probe -------------------------------------

// Sampled sup over X of |F(x,0,X) - F(y,0,X)| / (1 + |X|).
double theta_estimate(const OperatorSpec& spec, std::size_t x, std::size_t y,
                      const std::vector<SymMatrix>& samples);

// Deterministic matrix sample set with spectral norms spread up to cap R.
std::vector<SymMatrix> theta_sample_matrices(int dim, double R,
                                             std::size_t count,
                                             std::uint64_t seed);

} // namespace obstacle
