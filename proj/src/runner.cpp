#include "obstacle/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

#include "obstacle/artifacts.hpp"
#include "obstacle/estimators.hpp"
#include "obstacle/norms.hpp"
#include "obstacle/scenario.hpp"
#include "obstacle/solver.hpp"
#include "obstacle/verify.hpp"

namespace obstacle {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::array<double, 2> domain_center(const Grid& g) {
  return {(g.lo[0] + g.hi[0]) / 2.0,
          g.dim == 2 ? (g.lo[1] + g.hi[1]) / 2.0 : 0.0};
}

double probe_radius(const Grid& g) {
  double ext = g.extent(0);
  if (g.dim == 2) ext = std::min(ext, g.extent(1));
  return ext / 4.0;
}

struct Solved {
  SolveResult primary;
  std::string primary_name;
  std::optional<SolveResult> penalized; // set when it ran and is not primary
  double cross_diff = -1.0;             // >= 0 iff both solvers ran
};

Solved run_solvers(const ProblemSpec& problem, const SolverConfig& sc,
                   const std::string& selection, std::vector<std::string>& log) {
  Solved out;
  auto describe = [&log](const std::string& name, const SolveReport& r) {
    log.push_back(name + ": " + (r.converged ? "converged" : "FAILED") +
                  " after " + std::to_string(r.iterations) +
                  " iterations, final residual " + fmt(r.final_residual) +
                  (r.failure_reason.empty() ? "" : " (" + r.failure_reason + ")"));
  };

  if (selection == "direct") {
    out.primary = solve_complementarity(problem, sc);
    out.primary_name = "direct";
    describe("direct", out.primary.report);
  } else if (selection == "penalized") {
    out.primary = continuation_solve(problem, sc);
    out.primary_name = "penalized";
    describe("penalized", out.primary.report);
  } else if (selection == "both") {
    out.primary = solve_complementarity(problem, sc);
    out.primary_name = "direct";
    describe("direct", out.primary.report);
    out.penalized = continuation_solve(problem, sc);
    describe("penalized", out.penalized->report);
    if (out.primary.report.converged && out.penalized->report.converged) {
      out.cross_diff = sup_distance(out.primary.u, out.penalized->u);
      log.push_back("cross-solver sup difference " + fmt(out.cross_diff));
    }
  } else {
    throw std::invalid_argument("unknown solver selection '" + selection +
                                "' (expected penalized, direct, both)");
  }
  return out;
}

struct Analysis {
  VerifyDiagnostics diagnostics;
  OscillationTrace osc;
  HolderEstimate hu;
  GradientHolderEstimate hdu;
  HarnackResult weak;
  HarnackResult localmax;
  std::optional<double> closed_err;
};

Analysis analyze_solution(const ProblemSpec& problem, const ScalarField& u,
                          const SolverConfig& sc, const ScenarioConfig& cfg) {
  Analysis a;
  const Grid& g = problem.grid;
  const double contact_tol = sc.effective_contact_tol(g);
  a.diagnostics = verify_solution(problem, u, contact_tol);

  const auto center = domain_center(g);
  const double rmax = probe_radius(g);
  a.osc = oscillation_decay(u, problem.f, center,
                            {rmax, rmax / 2.0, rmax / 4.0}, problem.exponents);

  const double margin = rmax / 4.0;
  a.hu = holder_exponent(u, margin_nodes(g, margin), Exec::Parallel);
  a.hdu = gradient_holder(u, a.diagnostics.partition, problem.phi, problem.psi,
                          margin, problem.exponents);

  ScalarField slack = u;
  for (std::size_t k = 0; k < g.size(); ++k)
    slack.v[k] = std::max(u.v[k] - problem.phi.v[k], 0.0);
  a.weak = harnack_probe(slack, problem.f, center, rmax / 2.0, cfg.eps0,
                         problem.exponents, ProbeMode::WeakHarnack);
  a.localmax = harnack_probe(u, problem.f, center, rmax / 2.0, cfg.eps0,
                             problem.exponents, ProbeMode::LocalMax);

  if (auto exact = closed_form_solution(cfg.scenario)) {
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto x = g.coord(k);
      err = std::max(err, std::abs(u.v[k] - (*exact)(x[0], x[1])));
    }
    a.closed_err = err;
  }
  return a;
}

// The direct solver certifies the assembled residual; the penalized one
// stops at the delta floor, whose leftover penetration scales like
// delta * (penalty force).  The gate widens accordingly.
double invariant_band(const SolverConfig& sc, const Solved& solved) {
  const double tol_gate =
      std::max(sc.tolerance, solved.primary.report.residual_floor);
  double band = 10.0 * tol_gate;
  if (solved.primary_name == "penalized") {
    const auto& trace = solved.primary.report.penalty_trace;
    const double force = trace.empty() ? 0.0 : trace.back();
    band += 2.0 * sc.delta_floor * force;
  }
  return band;
}

ojson report_body(const std::string& command, const ScenarioConfig& cfg,
                  const RunOptions& opt, const Solved& solved,
                  const Analysis& a, const Grid& g) {
  const SolveReport& pr = solved.primary.report;
  const SolveReport* pen = solved.primary_name == "penalized"
                               ? &pr
                               : (solved.penalized ? &solved.penalized->report
                                                   : nullptr);

  ojson j;
  j["command"] = command;
  j["scenario"] = cfg.scenario.empty() ? "inline" : cfg.scenario;
  j["solver"] = opt.solver;
  j["converged"] = pr.converged;
  if (!pr.converged) j["failure_reason"] = pr.failure_reason;
  j["iterations"] = pr.iterations;
  j["final_residual"] = pr.final_residual;
  j["residual_floor"] = pr.residual_floor;
  j["residual_history"] = pr.residual_history;

  ojson deltas = ojson::array();
  ojson trace = ojson::array();
  if (pen) {
    for (const DeltaStep& d : pen->delta_path)
      deltas.push_back({{"delta", d.delta},
                        {"tail", d.tail},
                        {"penalty_sup", d.penalty_sup},
                        {"iterations", d.iterations}});
    for (double p : pen->penalty_trace) trace.push_back(p);
  }
  j["delta_path"] = deltas;
  j["penalty_trace"] = trace;

  const auto counts = a.diagnostics.partition.counts();
  j["regime_counts"] = {{"lower", counts[0]}, {"pde", counts[1]},
                        {"upper", counts[2]}};
  j["constraint_violation_max"] = a.diagnostics.max_obstacle_violation;
  j["complementarity_max"] = a.diagnostics.max_abs_residual;
  j["boundary_mismatch_max"] = a.diagnostics.max_boundary_mismatch;

  j["holder"] = {
      {"u_exponent", a.hu.defined ? ojson(a.hu.exponent) : ojson(nullptr)},
      {"du_exponent", a.hdu.defined ? ojson(a.hdu.beta_hat) : ojson(nullptr)}};

  ojson osc = ojson::array();
  for (const OscillationEntry& e : a.osc.entries)
    osc.push_back({{"r", e.r},
                   {"omega", e.omega},
                   {"theta", e.theta_defined ? ojson(e.theta) : ojson(nullptr)}});
  j["oscillation"] = osc;

  j["harnack"] = {
      {"weak_ratio",
       a.weak.denominator_zero ? ojson(nullptr) : ojson(a.weak.ratio)},
      {"localmax_ratio",
       a.localmax.denominator_zero ? ojson(nullptr) : ojson(a.localmax.ratio)},
      {"eps0", cfg.eps0}};
  j["closed_form_sup_error"] =
      a.closed_err ? ojson(*a.closed_err) : ojson(nullptr);
  if (solved.cross_diff >= 0.0) j["cross_solver_sup_diff"] = solved.cross_diff;
  j["theta0_boundary_density"] = g.dim == 1 ? 1.0 : 1.5707963267948966;
  return j;
}

std::vector<AnalysisRow> analysis_rows(const ProblemSpec& problem,
                                       const Analysis& a,
                                       const ScenarioConfig& cfg) {
  std::vector<AnalysisRow> rows;
  const auto counts = a.diagnostics.partition.counts();
  rows.push_back({"regime_count", "lower", static_cast<double>(counts[0])});
  rows.push_back({"regime_count", "pde", static_cast<double>(counts[1])});
  rows.push_back({"regime_count", "upper", static_cast<double>(counts[2])});

  rows.push_back({"holder_u", "exponent", a.hu.defined ? a.hu.exponent : -1.0});
  rows.push_back({"holder_u", "seminorm", a.hu.defined ? a.hu.seminorm : -1.0});
  rows.push_back(
      {"holder_du", "exponent", a.hdu.defined ? a.hdu.beta_hat : -1.0});
  rows.push_back(
      {"holder_du", "seminorm", a.hdu.defined ? a.hdu.seminorm : -1.0});
  if (a.hdu.contact_mismatch_lower)
    rows.push_back(
        {"contact_gradient_mismatch", "lower", *a.hdu.contact_mismatch_lower});
  if (a.hdu.contact_mismatch_upper)
    rows.push_back(
        {"contact_gradient_mismatch", "upper", *a.hdu.contact_mismatch_upper});

  for (const OscillationEntry& e : a.osc.entries) {
    rows.push_back({"oscillation_omega", "r=" + fmt(e.r), e.omega});
    if (e.theta_defined)
      rows.push_back({"oscillation_theta", "r=" + fmt(e.r), e.theta});
  }

  if (a.weak.denominator_zero)
    rows.push_back({"harnack_weak", "denominator_zero", 1.0});
  else
    rows.push_back({"harnack_weak", "ratio", a.weak.ratio});
  if (a.localmax.denominator_zero)
    rows.push_back({"harnack_localmax", "denominator_zero", 1.0});
  else
    rows.push_back({"harnack_localmax", "ratio", a.localmax.ratio});

  const Grid& g = problem.grid;
  const double h = g.min_spacing();
  for (double r : {2.0 * h, 4.0 * h, 8.0 * h})
    rows.push_back({"n_r_count", "r=" + fmt(r),
                    static_cast<double>(a.diagnostics.partition.n_r(r).size())});

  // obstacle joint modulus at a few radii
  const auto sigma = sample_modulus(problem.phi, problem.psi,
                                    {2.0 * h, 8.0 * h, 32.0 * h},
                                    Exec::Parallel);
  for (const auto& [r, s] : sigma)
    rows.push_back({"sigma0", "r=" + fmt(r), s});

  // operator coefficient-continuity probe between the center node and a
  // neighbor a quarter extent away along axis 1
  const std::size_t cx =
      g.flat(g.nodes[0] / 2, g.dim == 2 ? g.nodes[1] / 2 : 0);
  const int shift = std::max(1, g.nodes[0] / 4);
  const std::size_t cy =
      g.flat(g.nodes[0] / 2 - shift, g.dim == 2 ? g.nodes[1] / 2 : 0);
  const auto mats = theta_sample_matrices(g.dim, 1e3, 1000, cfg.seed);
  rows.push_back({"theta_continuity", "pair", theta_estimate(problem.op, cx, cy, mats)});

  const StructureReport sr = check_structure_condition(
      problem.op, problem.lambda, problem.Lambda, problem.mu, 2000, cfg.seed);
  rows.push_back({"structure_violation", "max", sr.max_violation});

  if (a.closed_err)
    rows.push_back({"closed_form_error", "sup", *a.closed_err});
  return rows;
}

int solve_like_command(const ScenarioConfig& cfg, const RunOptions& opt,
                       RunOutcome& out, bool write_solution,
                       bool write_analysis) {
  const ProblemSpec problem = build_problem(cfg);
  SolverConfig sc = cfg.solver_config();
  sc.validate();

  Solved solved = run_solvers(problem, sc, opt.solver, out.log);
  const Analysis a = analyze_solution(problem, solved.primary.u, sc, cfg);
  const std::uint64_t hash = config_hash(cfg);

  ojson body = report_body(opt.command, cfg, opt, solved, a, problem.grid);
  out.report_path = out.out_dir + "/report.json";
  write_report_json(out.report_path, body, hash);

  if (write_solution) {
    out.solution_path = out.out_dir + "/solution.csv";
    write_solution_csv(out.solution_path, problem, solved.primary.u,
                       a.diagnostics.partition, hash);
  }
  if (write_analysis) {
    out.analysis_path = out.out_dir + "/analysis.csv";
    write_analysis_csv(out.analysis_path, analysis_rows(problem, a, cfg),
                       hash);
  }

  const bool all_converged =
      solved.primary.report.converged &&
      (!solved.penalized || solved.penalized->report.converged);
  if (!all_converged) {
    out.message = "solver did not converge: " +
                  (solved.primary.report.converged
                       ? solved.penalized->report.failure_reason
                       : solved.primary.report.failure_reason);
    return kExitNoConverge;
  }

  const double band = invariant_band(sc, solved);
  const VerifyDiagnostics& vd = a.diagnostics;
  if (vd.max_obstacle_violation > band || vd.max_abs_residual > band ||
      vd.max_boundary_mismatch > band) {
    out.message = "invariant failure: obstacle violation " +
                  fmt(vd.max_obstacle_violation) + ", residual " +
                  fmt(vd.max_abs_residual) + ", boundary mismatch " +
                  fmt(vd.max_boundary_mismatch) + " vs band " + fmt(band);
    return kExitInvariant;
  }
  out.message = "ok: residual " + fmt(vd.max_abs_residual) +
                ", obstacle violation " + fmt(vd.max_obstacle_violation);
  return kExitOk;
}

ScenarioConfig refined(const ScenarioConfig& cfg, int level) {
  ScenarioConfig c = cfg;
  for (int i = 0; i < level; ++i) {
    c.nodes1 = 2 * c.nodes1 - 1;
    if (c.dim == 2) c.nodes2 = 2 * c.nodes2 - 1;
  }
  return c;
}

int sweep_h_command(const ScenarioConfig& cfg, const RunOptions& opt,
                    RunOutcome& out) {
  const std::string solver = opt.solver == "penalized" ? "penalized" : "direct";
  std::vector<ScalarField> solutions;
  std::vector<double> spacings;
  std::vector<AnalysisRow> rows;
  ojson levels = ojson::array();

  for (int level = 0; level < 3; ++level) {
    const ScenarioConfig c = refined(cfg, level);
    const ProblemSpec problem = build_problem(c);
    SolverConfig sc = c.solver_config();
    sc.validate();
    const SolveResult res = solver == "direct"
                                ? solve_complementarity(problem, sc)
                                : continuation_solve(problem, sc);
    out.log.push_back("level " + std::to_string(level) + " (" +
                      std::to_string(c.nodes1) + " nodes): " +
                      (res.report.converged ? "converged" : "FAILED") +
                      ", residual " + fmt(res.report.final_residual));
    if (!res.report.converged) {
      out.message = "sweep-h: level " + std::to_string(level) +
                    " did not converge (" + res.report.failure_reason + ")";
      return kExitNoConverge;
    }
    solutions.push_back(res.u);
    spacings.push_back(problem.grid.h[0]);
  }

  const auto exact = closed_form_solution(cfg.scenario);
  std::vector<double> errors;
  for (int level = 0; level < 3; ++level) {
    const Grid& g = solutions[static_cast<std::size_t>(level)].grid;
    const ScalarField& u = solutions[static_cast<std::size_t>(level)];
    double err = 0.0;
    if (exact) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        const auto x = g.coord(k);
        err = std::max(err, std::abs(u.v[k] - (*exact)(x[0], x[1])));
      }
    } else if (level < 2) {
      // no closed form: successive differences on the shared (coarser) nodes
      const ScalarField& fine = solutions[static_cast<std::size_t>(level + 1)];
      const Grid& fg = fine.grid;
      for (std::size_t k = 0; k < g.size(); ++k) {
        const auto ij = g.multi(k);
        const std::size_t fk = fg.flat(2 * ij[0], g.dim == 2 ? 2 * ij[1] : 0);
        err = std::max(err, std::abs(u.v[k] - fine.v[fk]));
      }
    } else {
      break;
    }
    errors.push_back(err);
    const std::string label = "level" + std::to_string(level);
    rows.push_back({"sweep_h", label, spacings[static_cast<std::size_t>(level)]});
    rows.push_back({"sweep_error", label, err});
    levels.push_back({{"h", spacings[static_cast<std::size_t>(level)]},
                      {"nodes", refined(cfg, level).nodes1},
                      {"error", err},
                      {"exact", err < 1e-9}});
  }

  ojson orders = ojson::array();
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const std::string label =
        "level" + std::to_string(i) + std::to_string(i + 1);
    if (errors[i] < 1e-9 && errors[i + 1] < 1e-9) {
      rows.push_back({"sweep_order_exact", label, 1.0});
      orders.push_back({{"pair", label}, {"order", nullptr}, {"exact", true}});
    } else {
      const double order = std::log2(errors[i] / errors[i + 1]);
      rows.push_back({"sweep_order", label, order});
      orders.push_back({{"pair", label}, {"order", order}, {"exact", false}});
      out.log.push_back("observed order " + label + ": " + fmt(order));
    }
  }

  const std::uint64_t hash = config_hash(cfg);
  out.analysis_path = out.out_dir + "/analysis.csv";
  write_analysis_csv(out.analysis_path, rows, hash);
  ojson body;
  body["command"] = opt.command;
  body["scenario"] = cfg.scenario.empty() ? "inline" : cfg.scenario;
  body["solver"] = solver;
  body["sweep"] = levels;
  body["orders"] = orders;
  out.report_path = out.out_dir + "/report.json";
  write_report_json(out.report_path, body, hash);
  out.message = "sweep-h: " + std::to_string(errors.size()) + " error levels";
  return kExitOk;
}

int sweep_delta_command(const ScenarioConfig& cfg, const RunOptions& opt,
                        RunOutcome& out) {
  const ProblemSpec problem = build_problem(cfg);
  SolverConfig sc = cfg.solver_config();
  sc.validate();
  const MollifiedData data = prepare_mollified(problem, sc.epsilon);

  const std::vector<double> deltas = {1e-3, 1e-4, 1e-5, 1e-6};
  std::vector<AnalysisRow> rows;
  ojson path = ojson::array();
  ojson trace = ojson::array();
  ScalarField prev;
  bool have_prev = false;
  for (double delta : deltas) {
    const SolveResult res = solve_penalized(problem, sc.epsilon, delta, sc,
                                            have_prev ? &prev : nullptr);
    if (!res.report.converged) {
      out.message = "sweep-delta: no convergence at delta " + fmt(delta) +
                    " (" + res.report.failure_reason + ")";
      return kExitNoConverge;
    }
    const double pen = penalty_sup(data, delta, res.u);
    const double tail = have_prev ? sup_distance(prev, res.u) : 0.0;
    const std::string label = "delta=" + fmt(delta);
    rows.push_back({"penalty_sup", label, pen});
    rows.push_back({"tail", label, tail});
    rows.push_back({"iterations", label,
                    static_cast<double>(res.report.iterations)});
    path.push_back({{"delta", delta},
                    {"tail", tail},
                    {"penalty_sup", pen},
                    {"iterations", res.report.iterations}});
    trace.push_back(pen);
    out.log.push_back(label + ": penalty sup " + fmt(pen) + ", tail " +
                      fmt(tail));
    prev = res.u;
    have_prev = true;
  }

  const std::uint64_t hash = config_hash(cfg);
  out.analysis_path = out.out_dir + "/analysis.csv";
  write_analysis_csv(out.analysis_path, rows, hash);
  ojson body;
  body["command"] = opt.command;
  body["scenario"] = cfg.scenario.empty() ? "inline" : cfg.scenario;
  body["solver"] = "penalized";
  body["delta_path"] = path;
  body["penalty_trace"] = trace;
  out.report_path = out.out_dir + "/report.json";
  write_report_json(out.report_path, body, hash);
  out.message = "sweep-delta: " + std::to_string(deltas.size()) + " levels";
  return kExitOk;
}

int identity_test_command(const ScenarioConfig& cfg, const RunOptions& opt,
                          RunOutcome& out) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const std::size_t draws = 100000;
  std::size_t bitwise_mismatch = 0;
  std::size_t optimizer_mismatch = 0;
  double max_grid_gap = 0.0;

  for (std::size_t i = 0; i < draws; ++i) {
    const double A = dist(rng), B = dist(rng), C = dist(rng);
    const MinMaxResult r = minmax_reduction(A, B, C);
    const double direct = std::min(std::max(A, B), C);
    if (r.value != direct) ++bitwise_mismatch;

    const double at_opt = r.alpha * (r.beta * A + (1 - r.beta) * B) +
                          (1 - r.alpha) * C;
    if (at_opt != r.value) ++optimizer_mismatch;

    double outer = std::numeric_limits<double>::infinity();
    for (int ai = 0; ai <= 20; ++ai) {
      const double alpha = ai / 20.0;
      double inner = -std::numeric_limits<double>::infinity();
      for (int bi = 0; bi <= 20; ++bi) {
        const double beta = bi / 20.0;
        inner = std::max(inner, alpha * beta * A + alpha * (1 - beta) * B +
                                    (1 - alpha) * C);
      }
      outer = std::min(outer, inner);
    }
    max_grid_gap = std::max(max_grid_gap, std::abs(outer - r.value));
  }

  std::vector<AnalysisRow> rows = {
      {"identity", "draws", static_cast<double>(draws)},
      {"identity", "bitwise_mismatches", static_cast<double>(bitwise_mismatch)},
      {"identity", "optimizer_mismatches",
       static_cast<double>(optimizer_mismatch)},
      {"identity", "grid_oracle_max_gap", max_grid_gap},
  };
  const std::uint64_t hash = config_hash(cfg);
  out.analysis_path = out.out_dir + "/analysis.csv";
  write_analysis_csv(out.analysis_path, rows, hash);
  ojson body;
  body["command"] = opt.command;
  body["draws"] = draws;
  body["bitwise_mismatches"] = bitwise_mismatch;
  body["optimizer_mismatches"] = optimizer_mismatch;
  body["grid_oracle_max_gap"] = max_grid_gap;
  out.report_path = out.out_dir + "/report.json";
  write_report_json(out.report_path, body, hash);

  out.log.push_back("identity-test: " + std::to_string(draws) + " draws, " +
                    std::to_string(bitwise_mismatch) + " mismatches, grid gap " +
                    fmt(max_grid_gap));
  if (bitwise_mismatch > 0 || optimizer_mismatch > 0 ||
      max_grid_gap > 1e-12) {
    out.message = "identity-test FAILED";
    return kExitInvariant;
  }
  out.message = "identity-test: all draws agree";
  return kExitOk;
}

} // namespace

RunOutcome run_scenario(ScenarioConfig cfg, const RunOptions& opt) {
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;

  RunOutcome out;
  out.out_dir = cfg.out_dir;
  std::filesystem::create_directories(cfg.out_dir);

  if (opt.command == "solve") {
    out.exit_code = solve_like_command(cfg, opt, out, true, false);
  } else if (opt.command == "verify") {
    out.exit_code = solve_like_command(cfg, opt, out, false, false);
  } else if (opt.command == "analyze") {
    out.exit_code = solve_like_command(cfg, opt, out, true, true);
  } else if (opt.command == "sweep-h") {
    out.exit_code = sweep_h_command(cfg, opt, out);
  } else if (opt.command == "sweep-delta") {
    out.exit_code = sweep_delta_command(cfg, opt, out);
  } else if (opt.command == "identity-test") {
    out.exit_code = identity_test_command(cfg, opt, out);
  } else {
    throw std::invalid_argument("unknown command '" + opt.command + "'");
  }
  return out;
}

} // namespace obstacle
