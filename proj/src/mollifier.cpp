#include "obstacle/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace obstacle {

namespace {

std::vector<double> axis_weights(double h, double eps, int& K) {
  K = static_cast<int>(std::floor(eps / h));
  std::vector<double> w(2 * K + 1, 0.0);
  double mass = 0.0;
  for (int k = -K; k <= K; ++k) {
    const double t = 1.0 - std::abs(k) * h / eps;
    w[k + K] = std::max(t, 0.0);
    mass += w[k + K];
  }
  for (double& x : w) x /= mass;
  return w;
}

double extended(const std::vector<double>& line, int i, Extension ext) {
  const int n = static_cast<int>(line.size());
  if (i >= 0 && i < n) return line[i];
  if (ext == Extension::Zero) return 0.0;
  return line[std::clamp(i, 0, n - 1)];
}

void convolve_line(const std::vector<double>& in, std::vector<double>& out,
                   const std::vector<double>& w, int K, Extension ext) {
  const int n = static_cast<int>(in.size());
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = -K; k <= K; ++k) acc += w[k + K] * extended(in, i + k, ext);
    out[i] = acc;
  }
}

} // namespace

MollifierKernel build_mollifier(const Grid& g, double eps) {
  if (!(eps >= 0)) throw std::invalid_argument("mollifier: eps must be >= 0");
  MollifierKernel ker;
  ker.eps = eps;
  ker.dim = g.dim;
  if (eps < g.min_spacing()) {
    ker.identity = true;
    ker.w1 = {1.0};
    ker.w2 = {1.0};
    return ker;
  }
  ker.w1 = axis_weights(g.h[0], eps, ker.K1);
  if (g.dim == 2) ker.w2 = axis_weights(g.h[1], eps, ker.K2);
  return ker;
}

MollifyResult mollify(const ScalarField& field, double eps, Extension ext) {
  const Grid& g = field.grid;
  const MollifierKernel ker = build_mollifier(g, eps);
  if (ker.identity) return {field, true};

  ScalarField out = field;
  // separable convolution, axis 0 then axis 1
  {
    std::vector<double> in(g.nodes[0]), conv(g.nodes[0]);
    const int n2 = g.dim == 2 ? g.nodes[1] : 1;
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < g.nodes[0]; ++i) in[i] = out.v[g.flat(i, j)];
      convolve_line(in, conv, ker.w1, ker.K1, ext);
      for (int i = 0; i < g.nodes[0]; ++i) out.v[g.flat(i, j)] = conv[i];
    }
  }
  if (g.dim == 2) {
    std::vector<double> in(g.nodes[1]), conv(g.nodes[1]);
    for (int i = 0; i < g.nodes[0]; ++i) {
      for (int j = 0; j < g.nodes[1]; ++j) in[j] = out.v[g.flat(i, j)];
      convolve_line(in, conv, ker.w2, ker.K2, ext);
      for (int j = 0; j < g.nodes[1]; ++j) out.v[g.flat(i, j)] = conv[j];
    }
  }
  return {std::move(out), false};
}

std::pair<ScalarField, ScalarField> shift_obstacles(
    const ScalarField& phi, const ScalarField& psi, double eps,
    const std::vector<std::pair<double, double>>& modulus) {
  if (phi.grid != psi.grid)
    throw std::invalid_argument("shift_obstacles: obstacle pair on different grids");
  if (modulus.empty())
    throw std::invalid_argument("shift_obstacles: modulus table is empty");

  // smallest tabulated radius covering eps, else the largest available
  double sigma = modulus.back().second;
  double best_r = std::numeric_limits<double>::infinity();
  for (const auto& [r, s] : modulus)
    if (r >= eps - 1e-15 && r < best_r) {
      best_r = r;
      sigma = s;
    }

  auto lo = mollify(phi, eps, Extension::Nearest);
  auto hi = mollify(psi, eps, Extension::Nearest);
  for (double& x : lo.field.v) x -= sigma;
  for (double& x : hi.field.v) x += sigma;

  for (std::size_t k = 0; k < phi.size(); ++k) {
    const bool ok = lo.field.v[k] <= phi.v[k] && phi.v[k] <= psi.v[k] &&
                    psi.v[k] <= hi.field.v[k];
    if (!ok)
      throw std::invalid_argument(
          "shift_obstacles: ordering chain broken at node " + std::to_string(k) +
          " (modulus table understates the obstacle modulus?)");
  }
  return {std::move(lo.field), std::move(hi.field)};
}

} // namespace obstacle
