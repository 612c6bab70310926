#include "obstacle/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace obstacle {

namespace {

struct Builtin {
  const char* name;
  const char* text;
};

// A lower obstacle with a cusp at the origin and a far-away upper obstacle.
// The solution sits on the lower obstacle everywhere, which makes it an
// exact fixture: u = phi = 1 - |x|^{3/2}.
constexpr const char* kExample1d = R"(
[grid]
dim = 1
lo1 = -1
hi1 = 1
nodes1 = 1025

[operator]
family = linear
a11 = 1

[data]
f = 0
phi = 1 - abs(x1)^1.5
psi = 1000
g = 0
p = 4
q = 4
beta1 = 0.5
)";

// -u'' = 2 with wide obstacles; the scheme is exact on the quadratic
// solution 1 - x^2.
constexpr const char* kPoisson = R"(
[grid]
dim = 1
lo1 = -1
hi1 = 1
nodes1 = 2049

[operator]
family = linear
a11 = 1

[data]
f = 2
phi = -1000
psi = 1000
g = 0
p = 4
q = 4
beta1 = 0.5
)";

// Same Poisson data but the upper obstacle clips the parabola at 1/2; the
// solution is 1/2 - max(|x| - c, 0)^2 with c = 1 - sqrt(1/2).
constexpr const char* kClip1d = R"(
[grid]
dim = 1
lo1 = -1
hi1 = 1
nodes1 = 1025

[operator]
family = linear
a11 = 1

[data]
f = 2
phi = -1000
psi = 0.5
g = 0
p = 4
q = 4
beta1 = 0.5
)";

// Pucci maximal operator with a gradient term and radial obstacles that
// both see contact; no closed form, exercised by cross-solver agreement.
constexpr const char* kPucci2d = R"(
[grid]
dim = 2
lo1 = -1
hi1 = 1
nodes1 = 65
lo2 = -1
hi2 = 1
nodes2 = 65

[operator]
family = pucci_plus
lambda = 1
Lambda = 2
mu = 0.1

[data]
f = 1
phi = 0.5 - 2*(x1^2 + x2^2)
psi = 0.15 + 3*(x1^2 + x2^2 - 0.45)^2
g = 0
p = 4
q = 4
beta1 = 0.5
r0 = 0.2
)";

// Unconstrained 1D problem whose source has an integrable spike at
// x = 0.3; p < n makes the data exponent alpha0 = 2 - 1/p drop below 1.
constexpr const char* kRoughF = R"(
[grid]
dim = 1
lo1 = -1
hi1 = 1
nodes1 = 1025

[operator]
family = linear
a11 = 1

[data]
f = min(100, abs(x1 - 0.3)^(-0.4))
phi = -1000
psi = 1000
g = 0
p = 0.75
q = 1.5
beta1 = 0.5
)";

constexpr Builtin kBuiltins[] = {
    {"example_1d_unilateral", kExample1d},
    {"poisson_no_contact", kPoisson},
    {"bilateral_clip_1d", kClip1d},
    {"pucci_2d_bilateral", kPucci2d},
    {"rough_f_1d", kRoughF},
};

} // namespace

std::vector<std::string> builtin_scenario_names() {
  std::vector<std::string> names;
  for (const Builtin& b : kBuiltins) names.emplace_back(b.name);
  return names;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  for (const Builtin& b : kBuiltins) {
    if (name == b.name) {
      ScenarioConfig cfg = parse_config(b.text);
      cfg.scenario = name;
      return cfg;
    }
  }
  std::string known;
  for (const Builtin& b : kBuiltins) {
    if (!known.empty()) known += ", ";
    known += b.name;
  }
  throw std::invalid_argument("unknown scenario '" + name + "' (known: " +
                              known + ")");
}

std::optional<std::function<double(double, double)>>
closed_form_solution(const std::string& name) {
  if (name == "example_1d_unilateral")
    return [](double x, double) { return 1.0 - std::pow(std::abs(x), 1.5); };
  if (name == "poisson_no_contact")
    return [](double x, double) { return 1.0 - x * x; };
  if (name == "bilateral_clip_1d")
    return [](double x, double) {
      const double c = 1.0 - std::sqrt(0.5);
      const double over = std::max(std::abs(x) - c, 0.0);
      return 0.5 - over * over;
    };
  return std::nullopt;
}

} // namespace obstacle
