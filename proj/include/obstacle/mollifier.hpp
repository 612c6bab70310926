#pragma once

#include <utility>
#include <vector>

#include "obstacle/grid.hpp"

namespace obstacle {

// Tensor-product triangular (hat) kernel sampled on the lattice and
// normalized to unit mass per axis.  Smoothness of the continuum mollifier
// is a proof device; discrete convolution only needs nonnegativity,
// reflection symmetry, and mass one.
struct MollifierKernel {
  double eps = 0.0;
  int dim = 1;
  int K1 = 0, K2 = 0;            // support half-widths in lattice steps
  std::vector<double> w1, w2;    // weights for offsets -K..K per axis
  bool identity = false;         // eps below the grid spacing
};

MollifierKernel build_mollifier(const Grid& g, double eps);

// How a field continues past the boundary during convolution.  Data terms
// use Zero; obstacles and boundary data use Nearest so their modulus of
// continuity survives the extension.
enum class Extension { Zero, Nearest };

struct MollifyResult {
  ScalarField field;
  bool identity_fallback = false;
};

MollifyResult mollify(const ScalarField& field, double eps, Extension ext);

// Mollify-and-shift for an obstacle pair: the lower obstacle drops by the
// modulus value at eps and the upper one rises by it, so the ordering
//   phi_eps <= phi <= psi <= psi_eps
// holds nodewise.  `modulus` is a (radius, value) table as produced by
// sample_modulus; the entry at the smallest radius >= eps is used.  The
// ordering is verified and a violation (possible only with an understated
// modulus) throws with the offending node.
std::pair<ScalarField, ScalarField> shift_obstacles(
    const ScalarField& phi, const ScalarField& psi, double eps,
    const std::vector<std::pair<double, double>>& modulus);

} // namespace obstacle
