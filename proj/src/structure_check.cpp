#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "obstacle/operator_spec.hpp"

namespace obstacle {

namespace {

// Evaluation slack for the two-sided bound: each side is a chain of O(1)
// floating operations over quantities of these magnitudes, so any true
// (exact-arithmetic) inequality can be missed by at most a small multiple
// of eps times the magnitude sum.  64 is a generous constant.
double fp_slack(double fx, double fy, double pm, double pp, double grad) {
  const double eps = std::numeric_limits<double>::epsilon();
  return 64.0 * eps *
         (std::abs(fx) + std::abs(fy) + std::abs(pm) + std::abs(pp) + grad + 1.0);
}

struct Probe {
  std::array<double, 2> xi{0, 0}, eta{0, 0};
  SymMatrix X, Y;
};

// Structured difference directions that expose a wrong ellipticity window
// immediately: rank-one axis matrices and the identity, both signs, two
// magnitudes.  Random sampling alone can be slow to land on the worst axis.
std::vector<Probe> structured_probes(int dim) {
  std::vector<SymMatrix> base;
  if (dim == 1) {
    base = {SymMatrix::make1(1.0), SymMatrix::make1(-1.0)};
  } else {
    base = {SymMatrix::make2(1, 0, 0), SymMatrix::make2(-1, 0, 0),
            SymMatrix::make2(0, 0, 1), SymMatrix::make2(0, 0, -1),
            SymMatrix::make2(1, 0, 1), SymMatrix::make2(-1, 0, -1),
            SymMatrix::make2(0, 1, 0), SymMatrix::make2(0, -1, 0)};
  }
  std::vector<Probe> probes;
  for (double scale : {1.0, 10.0})
    for (const auto& M : base) {
      Probe p;
      p.X = M * scale;
      p.Y = SymMatrix::zero(dim);
      probes.push_back(p);
    }
  return probes;
}

} // namespace

StructureReport check_structure_condition(const OperatorSpec& spec,
                                          double lambda, double Lambda,
                                          const ScalarField& mu,
                                          std::size_t sample_count,
                                          std::uint64_t seed) {
  if (sample_count < 1)
    throw std::invalid_argument("structure check: need at least one sample");
  if (!(lambda > 0) || !(lambda <= Lambda))
    throw std::invalid_argument("structure check: need 0 < lambda <= Lambda");

  const Grid& g = mu.grid;
  const int dim = spec.dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> node_pick(0, g.size() - 1);
  const double scales[3] = {0.1, 1.0, 10.0};

  StructureReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  rep.max_violation_raw = rep.max_violation;

  auto test_tuple = [&](std::size_t node, const Probe& p) {
    const double fx = eval_operator(spec, node, p.xi, p.X);
    const double fy = eval_operator(spec, node, p.eta, p.Y);
    const double d = fx - fy;
    const SymMatrix D = p.X - p.Y;
    const double pm = pucci_extremal(PucciSign::Minus, D, lambda, Lambda);
    const double pp = pucci_extremal(PucciSign::Plus, D, lambda, Lambda);
    const double grad =
        mu.v[node] * std::hypot(p.xi[0] - p.eta[0], p.xi[1] - p.eta[1]);
    const double raw = std::max((pm - grad) - d, d - (pp + grad));
    const double adj = raw - fp_slack(fx, fy, pm, pp, grad);
    if (raw > rep.max_violation_raw) rep.max_violation_raw = raw;
    if (adj > rep.max_violation) {
      rep.max_violation = adj;
      rep.worst = {node, p.xi, p.eta, p.X, p.Y, adj};
    }
    ++rep.samples;
  };

  const auto probes = structured_probes(dim);
  const std::size_t probe_node = g.size() / 2;
  for (const auto& p : probes) {
    if (rep.samples >= sample_count) break;
    test_tuple(probe_node, p);
  }

  while (rep.samples < sample_count) {
    const double s = scales[rep.samples % 3];
    Probe p;
    const std::size_t node = node_pick(rng);
    p.xi = {s * normal(rng), dim == 2 ? s * normal(rng) : 0.0};
    p.eta = {s * normal(rng), dim == 2 ? s * normal(rng) : 0.0};
    if (dim == 1) {
      p.X = SymMatrix::make1(s * normal(rng));
      p.Y = SymMatrix::make1(s * normal(rng));
    } else {
      p.X = SymMatrix::make2(s * normal(rng), s * normal(rng), s * normal(rng));
      p.Y = SymMatrix::make2(s * normal(rng), s * normal(rng), s * normal(rng));
    }
    test_tuple(node, p);
  }
  return rep;
}

double theta_estimate(const OperatorSpec& spec, std::size_t x, std::size_t y,
                      const std::vector<SymMatrix>& samples) {
  double best = 0.0;
  const std::array<double, 2> zero{0.0, 0.0};
  for (const auto& X : samples) {
    const double num =
        std::abs(eval_operator(spec, x, zero, X) - eval_operator(spec, y, zero, X));
    best = std::max(best, num / (1.0 + X.norm()));
  }
  return best;
}

std::vector<SymMatrix> theta_sample_matrices(int dim, double R,
                                             std::size_t count,
                                             std::uint64_t seed) {
  if (!(R > 0)) throw std::invalid_argument("theta samples: cap must be positive");
  std::vector<SymMatrix> out;
  out.reserve(count);
  // deterministic sweep of +-t*I with t log-spaced up to the cap; the ratio
  // saturates along this ray for trace-like x-dependence
  const std::size_t sweep = std::min<std::size_t>(count / 2, 64);
  for (std::size_t i = 0; i < sweep; ++i) {
    const double t = std::pow(R, static_cast<double>(i + 1) / sweep);
    out.push_back(SymMatrix::identity(dim) * t);
    if (out.size() < count) out.push_back(SymMatrix::identity(dim) * (-t));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> logu(0.0, std::log(R));
  while (out.size() < count) {
    const double scale = std::exp(logu(rng));
    SymMatrix M = dim == 1
                      ? SymMatrix::make1(normal(rng))
                      : SymMatrix::make2(normal(rng), normal(rng), normal(rng));
    const double nm = M.norm();
    if (nm > 0) out.push_back(M * (scale / nm));
  }
  return out;
}

} // namespace obstacle
