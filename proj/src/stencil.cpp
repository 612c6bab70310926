#include "obstacle/stencil.hpp"

#include <cmath>
#include <stdexcept>

namespace obstacle {

namespace {

struct Step {
  int d1, d2;      // lattice offsets
  double len2;     // |physical step|^2
};

Step step_of(const Grid& g, StencilDirection d) {
  switch (d) {
    case StencilDirection::Axis1:
      return {1, 0, g.h[0] * g.h[0]};
    case StencilDirection::Axis2:
      return {0, 1, g.h[1] * g.h[1]};
    case StencilDirection::DiagUp:
      return {1, 1, g.h[0] * g.h[0] + g.h[1] * g.h[1]};
    case StencilDirection::DiagDown:
      return {1, -1, g.h[0] * g.h[0] + g.h[1] * g.h[1]};
  }
  throw std::logic_error("step_of: unreachable");
}

bool square_spacing(const Grid& g) {
  return std::abs(g.h[0] - g.h[1]) <= 1e-12 * std::max(g.h[0], g.h[1]);
}

} // namespace

bool has_stencil_neighbors(const Grid& g, std::size_t node, StencilDirection d) {
  if (g.dim == 1 && d != StencilDirection::Axis1) return false;
  const auto ij = g.multi(node);
  const Step s = step_of(g, d);
  const int i1 = ij[0], i2 = ij[1];
  if (i1 - s.d1 < 0 || i1 + s.d1 >= g.nodes[0]) return false;
  if (g.dim == 2) {
    const int lo = i2 - std::abs(s.d2), hi = i2 + std::abs(s.d2);
    if (lo < 0 || hi >= g.nodes[1]) return false;
  }
  return true;
}

double directional_second_difference(const ScalarField& u, std::size_t node,
                                     StencilDirection d) {
  const Grid& g = u.grid;
  if (!has_stencil_neighbors(g, node, d))
    throw std::invalid_argument(
        "directional_second_difference: node lacks a neighbor along the direction");
  const auto ij = g.multi(node);
  const Step s = step_of(g, d);
  const std::size_t fwd = g.flat(ij[0] + s.d1, ij[1] + s.d2);
  const std::size_t bwd = g.flat(ij[0] - s.d1, ij[1] - s.d2);
  return (u.v[fwd] - 2.0 * u.v[node] + u.v[bwd]) / s.len2;
}

void validate_discretizable(const OperatorSpec& spec, const Grid& g) {
  if (spec.dim != g.dim)
    throw std::invalid_argument("discretize: operator dimension does not match grid");
  switch (spec.family) {
    case OperatorFamily::Custom:
      if (!spec.custom_residual)
        throw std::invalid_argument(
            "discretize: custom operator supplies no monotone discrete form");
      return;
    case OperatorFamily::PucciPlusGradient:
    case OperatorFamily::PucciMinusGradient:
      if (g.dim == 2 && !square_spacing(g))
        throw std::invalid_argument(
            "discretize: diagonal stencil needs equal spacing on both axes");
      return;
    case OperatorFamily::Linear:
    case OperatorFamily::BellmanMax:
      for (const auto& m : spec.members) {
        for (std::size_t k = 0; k < g.size(); ++k) {
          if (g.dim == 1) {
            if (!(m.a11.v[k] >= 0))
              throw std::invalid_argument("discretize: a11 must be nonnegative");
            continue;
          }
          const double off = std::abs(m.a12.v[k]);
          if (!(m.a11.v[k] - off >= 0) || !(m.a22.v[k] - off >= 0))
            throw std::invalid_argument(
                "discretize: cross term breaks diagonal dominance, "
                "|a12| must not exceed a11 or a22");
        }
        if (g.dim == 2 && !square_spacing(g)) {
          for (std::size_t k = 0; k < g.size(); ++k)
            if (m.a12.v[k] != 0.0)
              throw std::invalid_argument(
                  "discretize: cross terms need equal spacing on both axes");
        }
      }
      return;
  }
}

void FrozenRow::add_off(std::size_t col, double coef) {
  if (coef == 0.0) return;
  for (int i = 0; i < noff; ++i)
    if (off[i].first == col) {
      off[i].second += coef;
      return;
    }
  off[noff++] = {col, coef};
}

double FrozenRow::apply(const ScalarField& v, std::size_t node) const {
  double s = diag * v.v[node] + c0;
  for (int i = 0; i < noff; ++i) s += off[i].second * v.v[off[i].first];
  return s;
}

double row_scale(const FrozenRow& row) {
  double s = std::abs(row.diag);
  for (int i = 0; i < row.noff; ++i) s += std::abs(row.off[i].second);
  return s;
}

namespace {

// Adds the row of -a * (second difference along d), a >= 0.
void add_second_difference(FrozenRow& row, const Grid& g, std::size_t node,
                           StencilDirection d, double a) {
  if (a == 0.0) return;
  const auto ij = g.multi(node);
  const Step s = step_of(g, d);
  const double w = a / s.len2;
  row.diag += 2.0 * w;
  row.add_off(g.flat(ij[0] + s.d1, ij[1] + s.d2), -w);
  row.add_off(g.flat(ij[0] - s.d1, ij[1] - s.d2), -w);
}

// One-sided slopes along an axis.
struct Slopes {
  double backward, forward;
  std::size_t prev, next;
};

Slopes axis_slopes(const ScalarField& u, std::size_t node, int axis) {
  const Grid& g = u.grid;
  const auto ij = g.multi(node);
  const double h = g.h[axis];
  const std::size_t prev =
      axis == 0 ? g.flat(ij[0] - 1, ij[1]) : g.flat(ij[0], ij[1] - 1);
  const std::size_t next =
      axis == 0 ? g.flat(ij[0] + 1, ij[1]) : g.flat(ij[0], ij[1] + 1);
  return {(u.v[node] - u.v[prev]) / h, (u.v[next] - u.v[node]) / h, prev, next};
}

// Monotone upwind |Du| rows.  With sign = +1 realizes +mu*sum_i max(D_i^-u,
// -D_i^+u, 0) (the form that pairs with P+); sign = -1 realizes
// -mu*sum_i max(D_i^+u, -D_i^-u, 0) (pairs with P-).  Branch bits are pushed
// into the signature: 0 none, 1 backward slope, 2 forward slope per axis.
void add_gradient_magnitude(FrozenRow& row, const ScalarField& u,
                            std::size_t node, double mu, int sign,
                            std::uint32_t& sig) {
  const Grid& g = u.grid;
  for (int axis = 0; axis < g.dim; ++axis) {
    const Slopes s = axis_slopes(u, node, axis);
    const double h = g.h[axis];
    const double a = sign > 0 ? s.backward : s.forward;   // slope kept as-is
    const double b = sign > 0 ? -s.forward : -s.backward; // slope negated
    std::uint32_t branch = 0;
    if (a >= b && a > 0.0)
      branch = 1;
    else if (b > 0.0)
      branch = 2;
    sig = sig * 3u + branch;
    if (mu == 0.0 || branch == 0) continue;
    const double w = sign > 0 ? mu / h : -mu / h;
    if (branch == 1) {
      // +-mu * (u(node) - u(prev_or_next))/h with the upwind node choice
      const std::size_t nbr = sign > 0 ? s.prev : s.next;
      row.diag += sign > 0 ? w : -w; // always +mu/h
      row.add_off(nbr, sign > 0 ? -w : w);
    } else {
      const std::size_t nbr = sign > 0 ? s.next : s.prev;
      row.diag += sign > 0 ? w : -w;
      row.add_off(nbr, sign > 0 ? -w : w);
    }
  }
}

// Upwind b . Du for a linear member: b+ uses the backward slope, b- the
// forward slope, keeping neighbor coefficients nonpositive.
void add_drift(FrozenRow& row, const ScalarField& u, std::size_t node,
               int axis, double b) {
  if (b == 0.0) return;
  const Grid& g = u.grid;
  const Slopes s = axis_slopes(u, node, axis);
  const double h = g.h[axis];
  if (b > 0) {
    row.diag += b / h;
    row.add_off(s.prev, -b / h);
  } else {
    row.diag += -b / h;
    row.add_off(s.next, b / h);
  }
}

FrozenRow freeze_linear_member(const LinearCoefficients& m, const ScalarField& u,
                               std::size_t node) {
  const Grid& g = u.grid;
  FrozenRow row;
  if (g.dim == 1) {
    add_second_difference(row, g, node, StencilDirection::Axis1, m.a11.v[node]);
    add_drift(row, u, node, 0, m.b1.v[node]);
    return row;
  }
  const double a12 = m.a12.v[node];
  const double off = std::abs(a12);
  add_second_difference(row, g, node, StencilDirection::Axis1,
                        m.a11.v[node] - off);
  add_second_difference(row, g, node, StencilDirection::Axis2,
                        m.a22.v[node] - off);
  if (off > 0.0)
    add_second_difference(row, g, node,
                          a12 > 0 ? StencilDirection::DiagUp
                                  : StencilDirection::DiagDown,
                          2.0 * off);
  add_drift(row, u, node, 0, m.b1.v[node]);
  add_drift(row, u, node, 1, m.b2.v[node]);
  return row;
}

// Extremal assignment over one orthogonal direction pair.  For the Plus
// operator each direction takes a = lambda on nonnegative curvature and
// a = Lambda otherwise (maximizing -a*s); Minus mirrors it.
struct PairChoice {
  double value;
  double a_first, a_second;
};

PairChoice pucci_pair(const ScalarField& u, std::size_t node,
                      StencilDirection first, StencilDirection second,
                      double lambda, double Lambda, bool plus) {
  const double s1 = directional_second_difference(u, node, first);
  const double a1 = (s1 >= 0.0) == plus ? lambda : Lambda;
  double value = -a1 * s1;
  double a2 = 0.0;
  if (u.grid.dim == 2) {
    const double s2 = directional_second_difference(u, node, second);
    a2 = (s2 >= 0.0) == plus ? lambda : Lambda;
    value -= a2 * s2;
  }
  return {value, a1, a2};
}

FrozenRow freeze_pucci(const OperatorSpec& spec, const ScalarField& u,
                       std::size_t node, bool plus) {
  const Grid& g = u.grid;
  const PairChoice axes = pucci_pair(u, node, StencilDirection::Axis1,
                                     StencilDirection::Axis2, spec.lambda,
                                     spec.Lambda, plus);
  FrozenRow row;
  std::uint32_t sig = 0;
  bool use_diag = false;
  PairChoice diag{0, 0, 0};
  if (g.dim == 2) {
    diag = pucci_pair(u, node, StencilDirection::DiagUp,
                      StencilDirection::DiagDown, spec.lambda, spec.Lambda,
                      plus);
    use_diag = plus ? diag.value > axes.value : diag.value < axes.value;
  }
  // branch encoding: pair selection and the two {lambda,Lambda} picks
  sig = (use_diag ? 1u : 0u);
  const PairChoice& ch = use_diag ? diag : axes;
  sig = sig * 4u + (ch.a_first == spec.Lambda ? 1u : 0u) +
        2u * (ch.a_second == spec.Lambda ? 1u : 0u);
  if (use_diag) {
    add_second_difference(row, g, node, StencilDirection::DiagUp, ch.a_first);
    add_second_difference(row, g, node, StencilDirection::DiagDown, ch.a_second);
  } else {
    add_second_difference(row, g, node, StencilDirection::Axis1, ch.a_first);
    if (g.dim == 2)
      add_second_difference(row, g, node, StencilDirection::Axis2, ch.a_second);
  }
  add_gradient_magnitude(row, u, node, spec.mu.v[node], plus ? +1 : -1, sig);
  row.signature = sig;
  return row;
}

} // namespace

FrozenRow freeze_row(const OperatorSpec& spec, const ScalarField& u,
                     std::size_t node) {
  switch (spec.family) {
    case OperatorFamily::Linear: {
      FrozenRow row = freeze_linear_member(spec.members[0], u, node);
      row.signature = 0;
      return row;
    }
    case OperatorFamily::BellmanMax: {
      // argmax member at the current iterate, first index on ties
      std::size_t best = 0;
      double best_val = freeze_linear_member(spec.members[0], u, node).apply(u, node);
      for (std::size_t m = 1; m < spec.members.size(); ++m) {
        const double val =
            freeze_linear_member(spec.members[m], u, node).apply(u, node);
        if (val > best_val) {
          best_val = val;
          best = m;
        }
      }
      FrozenRow row = freeze_linear_member(spec.members[best], u, node);
      row.signature = static_cast<std::uint32_t>(best);
      return row;
    }
    case OperatorFamily::PucciPlusGradient:
      return freeze_pucci(spec, u, node, true);
    case OperatorFamily::PucciMinusGradient:
      return freeze_pucci(spec, u, node, false);
    case OperatorFamily::Custom:
      throw std::invalid_argument("freeze_row: custom operators have no linearization");
  }
  throw std::logic_error("freeze_row: unreachable");
}

double discretize_operator(const OperatorSpec& spec, const ScalarField& u,
                           std::size_t node) {
  if (!u.grid.is_interior(node))
    throw std::invalid_argument("discretize_operator: interior nodes only");
  if (spec.family == OperatorFamily::Custom) {
    if (!spec.custom_residual)
      throw std::invalid_argument(
          "discretize_operator: custom operator supplies no monotone discrete form");
    return spec.custom_residual(u, node);
  }
  return freeze_row(spec, u, node).apply(u, node);
}

} // namespace obstacle
