#include "obstacle/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "obstacle/norms.hpp"

namespace obstacle {

namespace {

void check_ball_inside(const Grid& g, const std::array<double, 2>& center,
                       double r2) {
  double d = std::min(center[0] - g.lo[0], g.hi[0] - center[0]);
  if (g.dim == 2)
    d = std::min({d, center[1] - g.lo[1], g.hi[1] - center[1]});
  if (d < r2 * (1.0 - 1e-12))
    throw std::invalid_argument(
        "probe: the doubled ball must stay inside the domain");
}

struct Extrema {
  double lo, hi;
};

Extrema minmax_over(const ScalarField& u, const Region& region) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t k : region) {
    lo = std::min(lo, u.v[k]);
    hi = std::max(hi, u.v[k]);
  }
  return {lo, hi};
}

} // namespace

OscillationTrace oscillation_decay(const ScalarField& u, const ScalarField& f,
                                   const std::array<double, 2>& center,
                                   const std::vector<double>& radii,
                                   const ExponentSet& exponents) {
  if (u.grid != f.grid)
    throw std::invalid_argument("oscillation_decay: fields on different grids");
  OscillationTrace trace;
  trace.center = center;
  const double pn = std::min(exponents.p, static_cast<double>(exponents.n));

  for (double r : radii) {
    if (!(r > 0))
      throw std::invalid_argument("oscillation_decay: radii must be positive");
    check_ball_inside(u.grid, center, 2.0 * r);

    OscillationEntry e;
    e.r = r;
    const Region br = ball_nodes(u.grid, center, r);
    const Region b2r = ball_nodes(u.grid, center, 2.0 * r);
    const Extrema in = minmax_over(u, br);
    const Extrema out = minmax_over(u, b2r);
    e.M = in.hi;
    e.m = in.lo;
    e.omega = in.hi - in.lo;
    e.omega_2r = out.hi - out.lo;

    const double data = std::pow(r, exponents.alpha0) * lp_quasinorm(f, pn, b2r);
    if (e.omega_2r > 0.0) {
      e.theta = (e.omega - data) / e.omega_2r;
      e.theta_defined = true;
    }
    trace.entries.push_back(e);
  }
  return trace;
}

namespace {

constexpr std::size_t kPairScanCap = 4096;
constexpr int kMaxBins = 12;

struct BinStat {
  double sup = 0.0;
  double at_distance = 0.0;
  std::size_t pairs = 0;
};

struct FitResult {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
  int points = 0;
};

FitResult fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  FitResult fr;
  fr.points = static_cast<int>(xy.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [d, s] : xy) {
    const double x = std::log(d), y = std::log(s);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = fr.points;
  const double denom = m * sxx - sx * sx;
  if (denom <= 0) return fr;
  fr.slope = (m * sxy - sx * sy) / denom;
  fr.intercept = (sy - fr.slope * sx) / m;
  double ss = 0;
  for (const auto& [d, s] : xy) {
    const double e = std::log(s) - (fr.slope * std::log(d) + fr.intercept);
    ss += e * e;
  }
  fr.rms = std::sqrt(ss / m);
  return fr;
}

Region subsample(const Region& region, std::size_t cap) {
  if (region.size() <= cap) return region;
  const std::size_t stride = (region.size() + cap - 1) / cap;
  Region out;
  out.reserve(region.size() / stride + 1);
  for (std::size_t i = 0; i < region.size(); i += stride)
    out.push_back(region[i]);
  return out;
}

} // namespace

HolderEstimate holder_exponent(const ScalarField& field, const Region& region,
                               Exec ex) {
  HolderEstimate est;
  const Region nodes = subsample(region, kPairScanCap);
  const std::size_t m = nodes.size();
  if (m < 3) return est;
  const Grid& g = field.grid;

  // pass 1: largest pair distance
  const double dmax2 = blocked_max(m * m, ex, 0.0, [&](std::size_t idx) {
    const std::size_t i = idx / m, j = idx % m;
    if (j <= i) return 0.0;
    const auto xi = g.coord(nodes[i]), xj = g.coord(nodes[j]);
    const double dx = xi[0] - xj[0];
    const double dy = g.dim == 2 ? xi[1] - xj[1] : 0.0;
    return dx * dx + dy * dy;
  });
  const double dmax = std::sqrt(dmax2);
  if (!(dmax > 0)) return est;

  int nbins = kMaxBins;
  while (nbins > 2 && dmax / std::pow(2.0, nbins) < 4.0 * g.min_spacing())
    --nbins;

  // pass 2: bin-wise sup of |u(x)-u(y)| and the distance realizing it.
  // Serial accumulation per block would race; bins are tiny, so each block
  // keeps its own copy and the copies merge in block order.
  const std::size_t total = m * m;
  const std::size_t nblocks = (total + kSumBlock - 1) / kSumBlock;
  std::vector<std::vector<BinStat>> partial(
      ex == Exec::Parallel ? nblocks : 1,
      std::vector<BinStat>(static_cast<std::size_t>(nbins)));

  auto scan_block = [&](std::size_t b, std::vector<BinStat>& bins) {
    const std::size_t lo = b * kSumBlock;
    const std::size_t hi = std::min(lo + kSumBlock, total);
    for (std::size_t idx = lo; idx < hi; ++idx) {
      const std::size_t i = idx / m, j = idx % m;
      if (j <= i) continue;
      const auto xi = g.coord(nodes[i]), xj = g.coord(nodes[j]);
      const double dx = xi[0] - xj[0];
      const double dy = g.dim == 2 ? xi[1] - xj[1] : 0.0;
      const double d = std::sqrt(dx * dx + dy * dy);
      if (!(d > 0)) continue;
      int bin = static_cast<int>(std::floor(std::log2(dmax / d)));
      if (bin >= nbins) continue;
      bin = std::max(bin, 0);
      const double diff = std::abs(field.v[nodes[i]] - field.v[nodes[j]]);
      BinStat& bs = bins[static_cast<std::size_t>(bin)];
      ++bs.pairs;
      if (diff > bs.sup) {
        bs.sup = diff;
        bs.at_distance = d;
      }
    }
  };

  if (ex == Exec::Parallel) {
    parallel_map(nblocks, ex, [&](std::size_t b) { scan_block(b, partial[b]); });
  } else {
    for (std::size_t b = 0; b < nblocks; ++b) scan_block(b, partial[0]);
  }
  std::vector<BinStat> bins(static_cast<std::size_t>(nbins));
  for (const auto& part : partial)
    for (int b = 0; b < nbins; ++b) {
      bins[b].pairs += part[b].pairs;
      if (part[b].sup > bins[b].sup) {
        bins[b].sup = part[b].sup;
        bins[b].at_distance = part[b].at_distance;
      }
    }

  std::vector<std::pair<double, double>> xy;
  for (const auto& b : bins)
    if (b.pairs > 0 && b.sup > 0.0) xy.emplace_back(b.at_distance, b.sup);
  est.bins_used = static_cast<int>(xy.size());
  if (xy.size() < 2) return est;

  const FitResult fr = fit_loglog(xy);
  if (fr.points == 0 || !(fr.slope > 0)) return est;
  est.defined = true;
  est.exponent = std::min(fr.slope, 1.0);
  est.fit_residual = fr.rms;
  if (est.exponent != fr.slope) {
    // re-anchor the prefactor at the clamped slope
    double s = 0;
    for (const auto& [d, v] : xy) s += std::log(v) - est.exponent * std::log(d);
    est.seminorm = std::exp(s / xy.size());
  } else {
    est.seminorm = std::exp(fr.intercept);
  }
  return est;
}

namespace {

// Central-difference gradient component on interior nodes; zero elsewhere.
ScalarField central_gradient(const ScalarField& u, int axis) {
  const Grid& g = u.grid;
  ScalarField out(g, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.is_interior(k)) continue;
    const auto ij = g.multi(k);
    const std::size_t prev =
        axis == 0 ? g.flat(ij[0] - 1, ij[1]) : g.flat(ij[0], ij[1] - 1);
    const std::size_t next =
        axis == 0 ? g.flat(ij[0] + 1, ij[1]) : g.flat(ij[0], ij[1] + 1);
    out.v[k] = (u.v[next] - u.v[prev]) / (2.0 * g.h[axis]);
  }
  return out;
}

} // namespace

GradientHolderEstimate gradient_holder(const ScalarField& u,
                                       const RegimePartition& partition,
                                       const ScalarField& phi,
                                       const ScalarField& psi, double margin,
                                       const ExponentSet& exponents) {
  (void)exponents; // recorded by callers; the fit itself is data driven
  if (!(margin > 0))
    throw std::invalid_argument("gradient_holder: margin must be positive");
  const Grid& g = u.grid;
  const Region region = margin_nodes(g, margin);

  GradientHolderEstimate est;
  double beta = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < g.dim; ++axis) {
    const ScalarField du = central_gradient(u, axis);
    const HolderEstimate he = holder_exponent(du, region, Exec::Parallel);
    if (!he.defined) continue;
    est.defined = true;
    beta = std::min(beta, he.exponent);
    est.seminorm = std::max(est.seminorm, he.seminorm);
    est.fit_residual = std::max(est.fit_residual, he.fit_residual);
  }
  if (est.defined) est.beta_hat = beta;

  // contact gradient comparison, Du against the obstacle gradient taken
  // with the same stencil
  std::vector<ScalarField> du, dphi, dpsi;
  for (int axis = 0; axis < g.dim; ++axis) {
    du.push_back(central_gradient(u, axis));
    dphi.push_back(central_gradient(phi, axis));
    dpsi.push_back(central_gradient(psi, axis));
  }
  double worst_lower = -1.0, worst_upper = -1.0;
  for (std::size_t k : region) {
    if (partition.label[k] == Regime::Lower) {
      double s = 0;
      for (int a = 0; a < g.dim; ++a) {
        const double t = du[a].v[k] - dphi[a].v[k];
        s += t * t;
      }
      worst_lower = std::max(worst_lower, std::sqrt(s));
    } else if (partition.label[k] == Regime::Upper) {
      double s = 0;
      for (int a = 0; a < g.dim; ++a) {
        const double t = du[a].v[k] - dpsi[a].v[k];
        s += t * t;
      }
      worst_upper = std::max(worst_upper, std::sqrt(s));
    }
  }
  if (worst_lower >= 0) est.contact_mismatch_lower = worst_lower;
  if (worst_upper >= 0) est.contact_mismatch_upper = worst_upper;
  return est;
}

HarnackResult harnack_probe(const ScalarField& v, const ScalarField& f,
                            const std::array<double, 2>& center, double r,
                            double eps0, const ExponentSet& exponents,
                            ProbeMode mode) {
  if (!(r > 0)) throw std::invalid_argument("harnack_probe: radius must be positive");
  if (!(eps0 > 0)) throw std::invalid_argument("harnack_probe: eps0 must be positive");
  if (v.grid != f.grid)
    throw std::invalid_argument("harnack_probe: fields on different grids");
  check_ball_inside(v.grid, center, 2.0 * r);

  const double n = exponents.n;
  const double pn = std::min(exponents.p, static_cast<double>(exponents.n));
  const Region br = ball_nodes(v.grid, center, r);
  const Region b2r = ball_nodes(v.grid, center, 2.0 * r);

  HarnackResult res;
  if (mode == ProbeMode::WeakHarnack) {
    for (std::size_t k : b2r)
      if (v.v[k] < 0)
        throw std::invalid_argument(
            "harnack_probe: supersolution input must be nonnegative on the "
            "doubled ball");
    res.numerator = lp_quasinorm(v, eps0, br);
    double inf_v = std::numeric_limits<double>::infinity();
    for (std::size_t k : br) inf_v = std::min(inf_v, v.v[k]);
    const double data = std::pow(r, exponents.alpha0) * lp_quasinorm(f, pn, b2r);
    res.denominator = std::pow(r, n / eps0) * (inf_v + data);
  } else {
    const Region half = ball_nodes(v.grid, center, 0.5 * r);
    double sup_u = -std::numeric_limits<double>::infinity();
    for (std::size_t k : half) sup_u = std::max(sup_u, v.v[k]);
    res.numerator = sup_u;
    ScalarField fplus = f;
    for (double& x : fplus.v) x = std::max(x, 0.0);
    const double data =
        std::pow(r, exponents.alpha0) * lp_quasinorm(fplus, pn, b2r);
    res.denominator = std::pow(r, -n / eps0) * lp_quasinorm(v, eps0, br) + data;
  }
  if (res.denominator <= 0.0) {
    res.denominator_zero = true;
    res.ratio = std::numeric_limits<double>::infinity();
  } else {
    res.ratio = res.numerator / res.denominator;
  }
  return res;
}

} // namespace obstacle
