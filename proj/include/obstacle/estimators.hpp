#pragma once

#include <array>
#include <optional>
#include <vector>

#include "obstacle/exponents.hpp"
#include "obstacle/grid.hpp"
#include "obstacle/parallel.hpp"
#include "obstacle/partition.hpp"

namespace obstacle {

// ---- oscillation decay -------------------------------------------------

struct OscillationEntry {
  double r = 0.0;
  double M = 0.0, m = 0.0;   // sup and inf of u on the ball of radius r
  double omega = 0.0;        // M - m
  double omega_2r = 0.0;
  double theta = 0.0;        // (omega(r) - r^alpha0 * |f|) / omega(2r)
  bool theta_defined = false;
};

struct OscillationTrace {
  std::array<double, 2> center{0, 0};
  std::vector<OscillationEntry> entries;
};

// Oscillations of u on concentric balls with the data-corrected decay
// ratios.  Every doubled ball must fit inside the domain.  The data norm
// uses the integrability exponent min(p, n) on the doubled ball.
OscillationTrace oscillation_decay(const ScalarField& u, const ScalarField& f,
                                   const std::array<double, 2>& center,
                                   const std::vector<double>& radii,
                                   const ExponentSet& exponents);

// ---- pointwise regularity fits ----------------------------------------

struct HolderEstimate {
  double exponent = 0.0;     // clamped into (0, 1]
  double seminorm = 0.0;     // prefactor C of the fitted C * d^exponent
  double fit_residual = 0.0; // rms misfit in log-log space
  int bins_used = 0;
  bool defined = false;      // false for constant fields or degenerate fits
};

// Log-log least squares of bin-wise sup |u(x)-u(y)| against pair distance
// over dyadic distance bins.  The abscissa of each bin is the distance of
// the pair realizing its sup, which keeps concave moduli unbiased.  Large
// regions are subsampled deterministically (stride order, about 4k nodes).
HolderEstimate holder_exponent(const ScalarField& field, const Region& region,
                               Exec ex = Exec::Serial);

struct GradientHolderEstimate {
  double beta_hat = 0.0;
  double seminorm = 0.0;
  double fit_residual = 0.0;
  bool defined = false;
  // Sup over contact nodes of |Du - D(obstacle)| with both gradients taken
  // by the same central differences; empty when no contact node lies in the
  // probed region.
  std::optional<double> contact_mismatch_lower;
  std::optional<double> contact_mismatch_upper;
};

// Applies holder_exponent to the central-difference gradient components of
// u on the nodes further than margin from the boundary, and compares Du
// against the obstacle gradients on the contact sets.
GradientHolderEstimate gradient_holder(const ScalarField& u,
                                       const RegimePartition& partition,
                                       const ScalarField& phi,
                                       const ScalarField& psi, double margin,
                                       const ExponentSet& exponents);

// ---- Harnack-type ratio probes ----------------------------------------

enum class ProbeMode {
  WeakHarnack, // |v| in L^eps0 over B_r against inf v + data term
  LocalMax,    // sup over B_{r/2} against the L^eps0 average + data term
};

struct HarnackResult {
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  bool denominator_zero = false;
};

// Ratio probes of the two one-sided estimates.  WeakHarnack requires v >= 0
// on the doubled ball and throws otherwise; a vanishing denominator is
// flagged, not thrown.  eps0 is the caller's integrability exponent; ratios
// taken at different eps0 are not comparable.
HarnackResult harnack_probe(const ScalarField& v, const ScalarField& f,
                            const std::array<double, 2>& center, double r,
                            double eps0, const ExponentSet& exponents,
                            ProbeMode mode = ProbeMode::WeakHarnack);

} // namespace obstacle
