#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "obstacle/linear_system.hpp"
#include "obstacle/solver.hpp"
#include "obstacle/stencil.hpp"

namespace obstacle {

namespace {

// The three-regime system is solved as a nested game.  The outer player
// holds a per-node bit: glued to the lower obstacle, or free.  Evaluating
// that policy means solving the unilateral problem
//   max( F_h[u] - f, u - psi ) = 0   on the free nodes,
// which is done by an inner Howard iteration over the pde/upper branch
// (plus the operator's own frozen branches).  Only after the inner problem
// is resolved does the outer player compare branches again; at that point
// the active branch values are exactly zero, so the comparisons reduce to
// sign tests of the complementary quantities and are immune to the 1/h^2
// scale of the operator rows.  Updating both layers at once (the obvious
// single-loop variant) lets half-resolved max branches feed the contact
// decision and can cycle through neighbor interactions.

constexpr std::uint32_t kSigContact = 0; // identity row (boundary/lower/upper)

struct PolicyState {
  std::vector<unsigned char> free_node; // outer bit per node: 1 = not glued
  std::vector<unsigned char> pde;       // inner bit, meaningful on free nodes
};

} // namespace

SolveResult solve_complementarity(const ProblemSpec& problem,
                                  const SolverConfig& config) {
  config.validate();
  validate_discretizable(problem.op, problem.grid);
  if (problem.op.family == OperatorFamily::Custom)
    throw std::invalid_argument(
        "solve_complementarity: custom operators have no policy linearization");

  const auto t0 = std::chrono::steady_clock::now();
  const Grid& g = problem.grid;
  const std::size_t n = g.size();

  SolveResult out{initial_iterate(problem, problem.phi, problem.psi), {}};
  SolveReport& rep = out.report;

  PolicyState pol{std::vector<unsigned char>(n, 1),
                  std::vector<unsigned char>(n, 1)};
  std::vector<unsigned char> prev_alpha(n, 1), prev_prev_alpha(n, 1);
  std::vector<int> freeze_left(n, 0);

  const bool tie_pde = config.tie_break == TieBreak::PreferPde;

  // seed the outer policy from the Isaacs reduction at the feasible start
  for (std::size_t k = 0; k < n; ++k) {
    if (!g.is_interior(k)) continue;
    const double A = discretize_operator(problem.op, out.u, k) - problem.f.v[k];
    const double B = out.u.v[k] - problem.psi.v[k];
    const double C = out.u.v[k] - problem.phi.v[k];
    const MinMaxResult r = minmax_reduction(A, B, C, config.tie_break);
    pol.free_node[k] = static_cast<unsigned char>(r.alpha);
    pol.pde[k] = static_cast<unsigned char>(r.beta);
  }
  prev_alpha = pol.free_node;
  prev_prev_alpha = pol.free_node;

  std::vector<RowData> rows(n);
  std::vector<std::uint32_t> signature(n, 0), prev_signature(n, 0);
  bool alpha_stable = false;

  for (int outer = 0; outer < config.max_outer; ++outer) {
    // ---- policy evaluation: inner Howard on the free-node max problem
    for (int inner = 0; inner < config.max_inner; ++inner) {
      for (std::size_t k = 0; k < n; ++k) {
        rows[k] = RowData{};
        if (g.is_boundary(k)) {
          rows[k].diag = 1.0;
          rows[k].rhs = problem.g.v[k];
          signature[k] = kSigContact;
          continue;
        }
        if (!pol.free_node[k]) {
          rows[k].diag = 1.0;
          rows[k].rhs = problem.phi.v[k];
          signature[k] = kSigContact;
          continue;
        }
        const double A =
            discretize_operator(problem.op, out.u, k) - problem.f.v[k];
        const double B = out.u.v[k] - problem.psi.v[k];
        const bool choose_pde = tie_pde ? A >= B : A > B;
        pol.pde[k] = choose_pde ? 1 : 0;
        if (choose_pde) {
          const FrozenRow fr = freeze_row(problem.op, out.u, k);
          rows[k].diag = fr.diag;
          for (int e = 0; e < fr.noff; ++e)
            rows[k].add(fr.off[e].first, fr.off[e].second);
          // row encodes F_h[v] + c0 = f, constants move to the right side
          rows[k].rhs = problem.f.v[k] - fr.c0;
          signature[k] = 2 + fr.signature;
        } else {
          rows[k].diag = 1.0;
          rows[k].rhs = problem.psi.v[k];
          signature[k] = 1;
        }
      }
      if (inner > 0 && signature == prev_signature) break;
      prev_signature = signature;
      const auto x = solve_rows(rows, g.dim == 1);
      for (std::size_t k = 0; k < n; ++k) out.u.v[k] = x[k];
    }

    const ScalarField res = assemble_residual(problem, out.u, Exec::Parallel);
    const double resnorm = res.sup_norm();
    rep.residual_history.push_back(resnorm);
    rep.iterations = outer + 1;

    // Float evaluation floor of the assembled residual on this iterate.
    // The operator row enters the residual at every interior node no matter
    // the regime, so the scale uses the frozen operator rows, not the
    // policy rows.
    {
      const double eps = std::numeric_limits<double>::epsilon();
      const double umax = std::max(1.0, out.u.sup_norm());
      double scale = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (!g.is_interior(k)) continue;
        const double s = row_scale(freeze_row(problem.op, out.u, k));
        const double data_mag = std::abs(problem.f.v[k]) +
                                std::abs(problem.phi.v[k]) +
                                std::abs(problem.psi.v[k]);
        scale = std::max(scale, s * umax + data_mag);
      }
      rep.residual_floor = 16.0 * eps * scale;
    }

    // ---- outer policy improvement, with a period-2 safety freeze
    bool changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!g.is_interior(k)) continue;
      prev_prev_alpha[k] = prev_alpha[k];
      prev_alpha[k] = pol.free_node[k];
      if (freeze_left[k] > 0) {
        --freeze_left[k];
        continue;
      }
      const double A =
          discretize_operator(problem.op, out.u, k) - problem.f.v[k];
      const double B = out.u.v[k] - problem.psi.v[k];
      const double C = out.u.v[k] - problem.phi.v[k];
      const double inner_value = std::max(A, B);
      unsigned char next = tie_pde ? (inner_value <= C ? 1 : 0)
                                   : (inner_value < C ? 1 : 0);
      if (next != pol.free_node[k] && next == prev_prev_alpha[k]) {
        // flip-flop: settle on the branch closer to holding
        const double mag_free = std::abs(inner_value);
        const double mag_contact = std::abs(C);
        next = mag_free < mag_contact ? 1 : 0;
        freeze_left[k] = 3;
      }
      if (next != pol.free_node[k]) {
        pol.free_node[k] = next;
        changed = true;
      }
    }
    alpha_stable = !changed;

    rep.final_residual = resnorm;
    if (alpha_stable &&
        resnorm <= std::max(config.tolerance, rep.residual_floor)) {
      rep.converged = true;
      break;
    }
  }

  if (!rep.converged)
    rep.failure_reason = alpha_stable
                             ? "policy iteration stalled above tolerance"
                             : "policy iteration did not stabilize in " +
                                   std::to_string(config.max_outer) +
                                   " iterations";

  for (std::size_t k = 0; k < n; ++k) {
    if (!g.is_interior(k)) continue;
    if (!pol.free_node[k]) ++rep.regime_counts[0];
    else if (pol.pde[k]) ++rep.regime_counts[1];
    else ++rep.regime_counts[2];
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

} // namespace obstacle
