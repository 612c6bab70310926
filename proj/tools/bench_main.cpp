#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "obstacle/estimators.hpp"
#include "obstacle/norms.hpp"
#include "obstacle/parallel.hpp"
#include "obstacle/problem.hpp"
#include "obstacle/residual.hpp"

namespace {

using obstacle::Exec;
using Clock = std::chrono::steady_clock;

double ms_per_rep(int reps, const std::function<void()>& body) {
  const auto t0 = Clock::now();
  for (int i = 0; i < reps; ++i) body();
  const auto t1 = Clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

obstacle::ProblemSpec make_bench_problem(int n) {
  using namespace obstacle;
  const Grid g = Grid::box(-1, 1, n, -1, 1, n);
  ScalarField mu = field_from(g, [](double, double) { return 0.1; });
  OperatorSpec op = OperatorSpec::pucci_plus(g, 1.0, 2.0, std::move(mu));
  return make_problem(
      g, std::move(op),
      field_from(g, [](double x, double y) { return std::sin(3 * x) * std::cos(2 * y); }),
      field_from(g, [](double, double) { return -10.0; }),
      field_from(g, [](double, double) { return 10.0; }),
      field_from(g, [](double, double) { return 0.0; }),
      compute_exponents(2, 4.0, 4.0, 0.5));
}

} // namespace

int main(int argc, char** argv) {
  const bool smoke = argc > 1 && std::string(argv[1]) == "--smoke";
  const int n = smoke ? 33 : 257;
  const int reps = smoke ? 2 : 20;

  using namespace obstacle;
  const ProblemSpec problem = make_bench_problem(n);
  const Grid& g = problem.grid;
  const ScalarField u = field_from(g, [](double x, double y) {
    return std::exp(-2 * (x * x + y * y)) + 0.3 * std::sin(4 * x * y);
  });

  std::printf("grid %dx%d, %d reps, %d thread(s)\n", n, n, reps, max_threads());
  std::printf("%-24s %12s %12s %9s %s\n", "kernel", "serial ms", "parallel ms",
              "speedup", "bitwise");
  int failures = 0;
  auto row = [&](const char* name, double tser, double tpar, bool equal) {
    std::printf("%-24s %12.3f %12.3f %8.2fx %s\n", name, tser, tpar,
                tser / tpar, equal ? "ok" : "MISMATCH");
    if (!equal) ++failures;
  };

  {
    ScalarField rs, rp;
    const double tser =
        ms_per_rep(reps, [&] { rs = assemble_residual(problem, u, Exec::Serial); });
    const double tpar =
        ms_per_rep(reps, [&] { rp = assemble_residual(problem, u, Exec::Parallel); });
    row("assemble_residual", tser, tpar, bitwise_equal(rs.v, rp.v));
  }

  {
    const Region interior = interior_nodes(g);
    double ns = 0, np = 0;
    const double tser =
        ms_per_rep(reps, [&] { ns = lp_quasinorm(u, 1.5, interior, Exec::Serial); });
    const double tpar =
        ms_per_rep(reps, [&] { np = lp_quasinorm(u, 1.5, interior, Exec::Parallel); });
    row("lp_quasinorm", tser, tpar, ns == np);
  }

  {
    const Region region = margin_nodes(g, 0.125);
    HolderEstimate hs, hp;
    const int hreps = smoke ? 1 : 3;
    const double tser =
        ms_per_rep(hreps, [&] { hs = holder_exponent(u, region, Exec::Serial); });
    const double tpar =
        ms_per_rep(hreps, [&] { hp = holder_exponent(u, region, Exec::Parallel); });
    row("holder_exponent", tser, tpar,
        hs.exponent == hp.exponent && hs.seminorm == hp.seminorm &&
            hs.fit_residual == hp.fit_residual);
  }

  if (failures > 0) {
    std::printf("%d kernel(s) disagree between serial and parallel\n", failures);
    return 1;
  }
  return 0;
}
