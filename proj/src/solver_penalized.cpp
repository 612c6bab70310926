#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "obstacle/linear_system.hpp"
#include "obstacle/solver.hpp"
#include "obstacle/stencil.hpp"

namespace obstacle {

void SolverConfig::validate() const {
  if (!(tolerance > 0)) throw std::invalid_argument("solver: tolerance must be positive");
  if (max_outer < 1) throw std::invalid_argument("solver: max_outer must be >= 1");
  if (max_inner < 1) throw std::invalid_argument("solver: max_inner must be >= 1");
  if (!(delta0 > 0) || !(delta_floor > 0) || !(delta_floor <= delta0))
    throw std::invalid_argument("solver: need 0 < delta_floor <= delta0");
  if (!(delta_factor > 0 && delta_factor < 1))
    throw std::invalid_argument("solver: delta_factor must lie in (0,1)");
  if (!(damping > 0 && damping <= 1))
    throw std::invalid_argument("solver: damping must lie in (0,1]");
  if (!(epsilon >= 0)) throw std::invalid_argument("solver: epsilon must be >= 0");
}

std::vector<double> SolverConfig::delta_schedule() const {
  std::vector<double> s;
  double d = delta0;
  while (d > delta_floor) {
    s.push_back(d);
    d *= delta_factor;
  }
  s.push_back(delta_floor);
  return s;
}

double SolverConfig::effective_contact_tol(const Grid& g) const {
  if (contact_tol >= 0) return contact_tol;
  const double h = g.min_spacing();
  return 10.0 * tolerance + h * h;
}

ScalarField initial_iterate(const ProblemSpec& problem, const ScalarField& lo,
                            const ScalarField& hi) {
  const Grid& g = problem.grid;
  std::vector<RowData> rows(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) {
      rows[k].diag = 1.0;
      rows[k].rhs = problem.g.v[k];
      continue;
    }
    const auto ij = g.multi(k);
    double diag = 0.0;
    for (int axis = 0; axis < g.dim; ++axis) {
      const double w = 1.0 / (g.h[axis] * g.h[axis]);
      const std::size_t prev =
          axis == 0 ? g.flat(ij[0] - 1, ij[1]) : g.flat(ij[0], ij[1] - 1);
      const std::size_t next =
          axis == 0 ? g.flat(ij[0] + 1, ij[1]) : g.flat(ij[0], ij[1] + 1);
      rows[k].add(prev, -w);
      rows[k].add(next, -w);
      diag += 2.0 * w;
    }
    rows[k].diag = diag;
    rows[k].rhs = 0.0;
  }
  const auto w = solve_rows(rows, g.dim == 1);
  ScalarField u(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    u.v[k] = std::clamp(w[k], lo.v[k], hi.v[k]);
  return u;
}

namespace {

// Bound on the float evaluation noise of one assembled residual entry,
// derived from the magnitudes that enter its computation.  A residual
// cannot be certified below this level by re-evaluating it in doubles.
double residual_floor_from_rows(const std::vector<RowData>& rows,
                                const ScalarField& u, const ScalarField& f) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double umax = std::max(1.0, u.sup_norm());
  double scale = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double s = std::abs(rows[k].diag);
    for (int e = 0; e < rows[k].noff; ++e) s += std::abs(rows[k].off[e].second);
    scale = std::max(scale, s * umax + std::abs(f.v[k]));
  }
  return 16.0 * eps * scale;
}

} // namespace

SolveResult solve_penalized(const ProblemSpec& problem, double eps,
                            double delta, const SolverConfig& config,
                            const ScalarField* warm_start) {
  config.validate();
  if (!(delta > 0)) throw std::invalid_argument("solve_penalized: delta must be positive");
  validate_discretizable(problem.op, problem.grid);
  if (problem.op.family == OperatorFamily::Custom)
    throw std::invalid_argument(
        "solve_penalized: custom operators have no Newton linearization");

  const auto t0 = std::chrono::steady_clock::now();
  const Grid& g = problem.grid;
  const MollifiedData data = prepare_mollified(problem, eps);

  ScalarField u = warm_start ? *warm_start
                             : initial_iterate(problem, data.phi_eps, data.psi_eps);

  SolveResult out{std::move(u), {}};
  SolveReport& rep = out.report;
  const double inv_delta = 1.0 / delta;

  std::vector<RowData> rows(g.size());
  double best_res = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  double working_damping = config.damping;

  for (int it = 0; it < config.max_outer; ++it) {
    const ScalarField res = assemble_penalized_residual(problem, data, delta,
                                                        out.u, Exec::Parallel);
    const double resnorm = res.sup_norm();
    rep.residual_history.push_back(resnorm);
    rep.iterations = it + 1;

    // Jacobian rows: frozen operator linearization plus active-branch
    // penalty indicators ((u - psi)^+ differentiates to 1 on {u > psi},
    // 0 elsewhere, ties toward 0).
    for (std::size_t k = 0; k < g.size(); ++k) {
      rows[k] = RowData{};
      if (g.is_boundary(k)) {
        rows[k].diag = 1.0;
        rows[k].rhs = -res.v[k];
        continue;
      }
      const FrozenRow fr = freeze_row(data.op, out.u, k);
      rows[k].diag = fr.diag;
      for (int e = 0; e < fr.noff; ++e)
        rows[k].add(fr.off[e].first, fr.off[e].second);
      if (out.u.v[k] > data.psi_eps.v[k]) rows[k].diag += inv_delta;
      if (out.u.v[k] < data.phi_eps.v[k]) rows[k].diag += inv_delta;
      rows[k].rhs = -res.v[k];
    }

    rep.residual_floor = residual_floor_from_rows(rows, out.u, data.f);
    if (resnorm <= std::max(config.tolerance, rep.residual_floor)) {
      rep.converged = true;
      rep.final_residual = resnorm;
      break;
    }

    if (resnorm < 0.9 * best_res) {
      best_res = resnorm;
      stagnant = 0;
      working_damping = config.damping;
    } else if (++stagnant >= 5) {
      working_damping = std::max(working_damping * 0.5, 1.0 / 16.0);
      stagnant = 0;
    }

    const auto step = solve_rows(rows, g.dim == 1);
    for (std::size_t k = 0; k < g.size(); ++k)
      out.u.v[k] += working_damping * step[k];
    rep.final_residual = resnorm;
  }

  if (!rep.converged)
    rep.failure_reason = "penalized Newton did not reach tolerance in " +
                         std::to_string(config.max_outer) + " iterations";

  rep.penalty_trace.push_back(penalty_sup(data, delta, out.u));

  // regime counts at the working contact tolerance
  const double ctol = config.effective_contact_tol(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.is_interior(k)) continue;
    if (out.u.v[k] - problem.phi.v[k] <= ctol)
      ++rep.regime_counts[0];
    else if (problem.psi.v[k] - out.u.v[k] <= ctol)
      ++rep.regime_counts[2];
    else
      ++rep.regime_counts[1];
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

SolveResult continuation_solve(const ProblemSpec& problem,
                               const SolverConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto schedule = config.delta_schedule();

  SolveResult out{ScalarField(problem.grid), {}};
  SolveReport& rep = out.report;
  bool first = true;

  for (double delta : schedule) {
    SolveResult inner = solve_penalized(problem, config.epsilon, delta, config,
                                        first ? nullptr : &out.u);
    DeltaStep step;
    step.delta = delta;
    step.tail = first ? 0.0 : sup_distance(inner.u, out.u);
    step.penalty_sup = inner.report.penalty_trace.back();
    step.iterations = inner.report.iterations;

    out.u = std::move(inner.u);
    rep.iterations += inner.report.iterations;
    rep.residual_history.insert(rep.residual_history.end(),
                                inner.report.residual_history.begin(),
                                inner.report.residual_history.end());
    rep.delta_path.push_back(step);
    rep.penalty_trace.push_back(step.penalty_sup);
    rep.final_residual = inner.report.final_residual;
    rep.residual_floor = inner.report.residual_floor;
    rep.regime_counts = inner.report.regime_counts;

    if (!inner.report.converged) {
      rep.converged = false;
      rep.failure_reason = "continuation aborted at delta = " +
                           std::to_string(delta) + ": " +
                           inner.report.failure_reason;
      rep.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
      return out;
    }
    first = false;
  }
  rep.converged = true;
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

} // namespace obstacle
