#include "obstacle/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "obstacle/expr.hpp"
#include "obstacle/scenario.hpp"

namespace obstacle {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " +
                              what);
}

struct Assignment {
  int line;
  std::string section; // empty for top level
  std::string key, value;
};

double parse_number(const Assignment& a) {
  const char* begin = a.value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    fail_at(a.line, "[" + a.section + "] " + a.key + ": '" + a.value +
                        "' is not a number");
  return v;
}

int parse_int(const Assignment& a) {
  const double v = parse_number(a);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    fail_at(a.line, "[" + a.section + "] " + a.key + ": expected an integer");
  return i;
}

std::uint64_t parse_u64(const Assignment& a) {
  const char* begin = a.value.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0')
    fail_at(a.line, a.key + ": '" + a.value + "' is not a nonnegative integer");
  return v;
}

// Expressions are validated as soon as they are assigned so the diagnostic
// can carry the config line number.
std::string parse_expression(const Assignment& a) {
  try {
    Expr::parse(a.value);
  } catch (const std::invalid_argument& e) {
    fail_at(a.line, "[" + a.section + "] " + a.key + ": " + e.what());
  }
  return a.value;
}

int member_index(const Assignment& a, const ScenarioConfig& cfg,
                 std::size_t underscore) {
  const std::string tail = a.key.substr(underscore + 1);
  char* end = nullptr;
  const long idx = std::strtol(tail.c_str(), &end, 10);
  if (end == tail.c_str() || *end != '\0' || idx < 1)
    fail_at(a.line, "[operator] " + a.key + ": bad member suffix");
  if (static_cast<std::size_t>(idx) > cfg.member_coeffs.size())
    fail_at(a.line, "[operator] " + a.key + ": member " + std::to_string(idx) +
                        " out of range; set members = N first");
  return static_cast<int>(idx) - 1;
}

void apply_operator_key(ScenarioConfig& cfg, const Assignment& a) {
  const std::string& k = a.key;
  if (k == "family") {
    if (a.value != "linear" && a.value != "bellman_max" &&
        a.value != "pucci_plus" && a.value != "pucci_minus")
      fail_at(a.line, "[operator] family: unknown family '" + a.value +
                          "' (expected linear, bellman_max, pucci_plus, "
                          "pucci_minus)");
    cfg.family = a.value;
  } else if (k == "lambda") {
    cfg.lambda = parse_number(a);
  } else if (k == "Lambda") {
    cfg.Lambda = parse_number(a);
  } else if (k == "a11") {
    cfg.a11 = parse_expression(a);
  } else if (k == "a12") {
    cfg.a12 = parse_expression(a);
  } else if (k == "a22") {
    cfg.a22 = parse_expression(a);
  } else if (k == "b1") {
    cfg.b1 = parse_expression(a);
  } else if (k == "b2") {
    cfg.b2 = parse_expression(a);
  } else if (k == "mu") {
    cfg.mu = parse_expression(a);
  } else if (k == "members") {
    const int n = parse_int(a);
    if (n < 1 || n > 64)
      fail_at(a.line, "[operator] members: expected 1..64");
    cfg.member_coeffs.assign(static_cast<std::size_t>(n),
                             {"1", "0", "1", "0", "0"});
  } else if (const std::size_t u = k.rfind('_');
             u != std::string::npos && u > 0) {
    const std::string base = k.substr(0, u);
    int slot = -1;
    if (base == "a11") slot = 0;
    else if (base == "a12") slot = 1;
    else if (base == "a22") slot = 2;
    else if (base == "b1") slot = 3;
    else if (base == "b2") slot = 4;
    if (slot < 0) fail_at(a.line, "[operator] unknown key '" + k + "'");
    const int m = member_index(a, cfg, u);
    cfg.member_coeffs[static_cast<std::size_t>(m)][static_cast<std::size_t>(
        slot)] = parse_expression(a);
  } else {
    fail_at(a.line, "[operator] unknown key '" + k + "'");
  }
}

void apply(ScenarioConfig& cfg, const Assignment& a) {
  const std::string& sec = a.section;
  const std::string& k = a.key;
  if (sec.empty()) {
    if (k == "seed") cfg.seed = parse_u64(a);
    else if (k == "scenario") {} // consumed by the first pass
    else fail_at(a.line, "unknown top-level key '" + k +
                             "' (expected scenario or seed)");
  } else if (sec == "grid") {
    if (k == "dim") {
      cfg.dim = parse_int(a);
      if (cfg.dim != 1 && cfg.dim != 2)
        fail_at(a.line, "[grid] dim: expected 1 or 2");
    } else if (k == "lo1") cfg.lo1 = parse_number(a);
    else if (k == "hi1") cfg.hi1 = parse_number(a);
    else if (k == "nodes1") cfg.nodes1 = parse_int(a);
    else if (k == "lo2") cfg.lo2 = parse_number(a);
    else if (k == "hi2") cfg.hi2 = parse_number(a);
    else if (k == "nodes2") cfg.nodes2 = parse_int(a);
    else fail_at(a.line, "[grid] unknown key '" + k + "'");
  } else if (sec == "operator") {
    apply_operator_key(cfg, a);
  } else if (sec == "data") {
    if (k == "f") cfg.f = parse_expression(a);
    else if (k == "phi") cfg.phi = parse_expression(a);
    else if (k == "psi") cfg.psi = parse_expression(a);
    else if (k == "g") cfg.g = parse_expression(a);
    else if (k == "p") cfg.p = parse_number(a);
    else if (k == "q") cfg.q = parse_number(a);
    else if (k == "beta1") cfg.beta1 = parse_number(a);
    else if (k == "r0") cfg.r0 = parse_number(a);
    else if (k == "eps0") cfg.eps0 = parse_number(a);
    else fail_at(a.line, "[data] unknown key '" + k + "'");
  } else if (sec == "solver") {
    if (k == "tolerance") cfg.tolerance = parse_number(a);
    else if (k == "max_outer") cfg.max_outer = parse_int(a);
    else if (k == "max_inner") cfg.max_inner = parse_int(a);
    else if (k == "delta0") cfg.delta0 = parse_number(a);
    else if (k == "delta_factor") cfg.delta_factor = parse_number(a);
    else if (k == "delta_floor") cfg.delta_floor = parse_number(a);
    else if (k == "epsilon") cfg.epsilon = parse_number(a);
    else if (k == "damping") cfg.damping = parse_number(a);
    else if (k == "tie_break") {
      if (a.value != "pde" && a.value != "contact")
        fail_at(a.line, "[solver] tie_break: expected pde or contact");
      cfg.tie_break = a.value;
    } else if (k == "contact_tol") cfg.contact_tol = parse_number(a);
    else fail_at(a.line, "[solver] unknown key '" + k + "'");
  } else if (sec == "output") {
    if (k == "dir") cfg.out_dir = a.value;
    else fail_at(a.line, "[output] unknown key '" + k + "'");
  }
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
  std::vector<Assignment> items;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string raw =
        text.substr(pos, nl == std::string::npos ? nl : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_at(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "grid" && section != "operator" && section != "data" &&
          section != "solver" && section != "output")
        fail_at(line_no, "unknown section '[" + section + "]'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail_at(line_no, "expected 'key = value', got '" + line + "'");
    Assignment a{line_no, section, trim(line.substr(0, eq)),
                 trim(line.substr(eq + 1))};
    if (a.key.empty()) fail_at(line_no, "empty key");
    items.push_back(std::move(a));
  }

  ScenarioConfig cfg;
  bool seen_scenario = false;
  for (const Assignment& a : items) {
    if (a.section.empty() && a.key == "scenario") {
      if (seen_scenario) fail_at(a.line, "duplicate scenario key");
      seen_scenario = true;
      try {
        cfg = builtin_scenario(a.value);
      } catch (const std::invalid_argument& e) {
        fail_at(a.line, e.what());
      }
    }
  }
  for (const Assignment& a : items) apply(cfg, a);
  return cfg;
}

namespace {

// Shortest decimal form that parses back to the same double; canonical and
// human readable at once.
std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

} // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
  std::string out;
  auto kv = [&out](const std::string& k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  auto kd = [&](const std::string& k, double v) { kv(k, format_double(v)); };
  auto ki = [&](const std::string& k, long long v) {
    kv(k, std::to_string(v));
  };

  if (!cfg.scenario.empty()) kv("scenario", cfg.scenario);
  kv("seed", std::to_string(cfg.seed));

  out += "\n[grid]\n";
  ki("dim", cfg.dim);
  kd("lo1", cfg.lo1);
  kd("hi1", cfg.hi1);
  ki("nodes1", cfg.nodes1);
  if (cfg.dim == 2) {
    kd("lo2", cfg.lo2);
    kd("hi2", cfg.hi2);
    ki("nodes2", cfg.nodes2);
  }

  out += "\n[operator]\n";
  kv("family", cfg.family);
  kd("lambda", cfg.lambda);
  kd("Lambda", cfg.Lambda);
  if (cfg.family == "linear") {
    kv("a11", cfg.a11);
    if (cfg.dim == 2) {
      kv("a12", cfg.a12);
      kv("a22", cfg.a22);
    }
    kv("b1", cfg.b1);
    if (cfg.dim == 2) kv("b2", cfg.b2);
  } else if (cfg.family == "bellman_max") {
    ki("members", static_cast<long long>(cfg.member_coeffs.size()));
    for (std::size_t m = 0; m < cfg.member_coeffs.size(); ++m) {
      const std::string suffix = "_" + std::to_string(m + 1);
      kv("a11" + suffix, cfg.member_coeffs[m][0]);
      if (cfg.dim == 2) {
        kv("a12" + suffix, cfg.member_coeffs[m][1]);
        kv("a22" + suffix, cfg.member_coeffs[m][2]);
      }
      kv("b1" + suffix, cfg.member_coeffs[m][3]);
      if (cfg.dim == 2) kv("b2" + suffix, cfg.member_coeffs[m][4]);
    }
  } else {
    kv("mu", cfg.mu);
  }

  out += "\n[data]\n";
  kv("f", cfg.f);
  kv("phi", cfg.phi);
  kv("psi", cfg.psi);
  kv("g", cfg.g);
  kd("p", cfg.p);
  kd("q", cfg.q);
  kd("beta1", cfg.beta1);
  if (cfg.r0 >= 0.0) kd("r0", cfg.r0);
  kd("eps0", cfg.eps0);

  out += "\n[solver]\n";
  kd("tolerance", cfg.tolerance);
  ki("max_outer", cfg.max_outer);
  ki("max_inner", cfg.max_inner);
  kd("delta0", cfg.delta0);
  kd("delta_factor", cfg.delta_factor);
  kd("delta_floor", cfg.delta_floor);
  kd("epsilon", cfg.epsilon);
  kd("damping", cfg.damping);
  kv("tie_break", cfg.tie_break);
  kd("contact_tol", cfg.contact_tol);

  out += "\n[output]\n";
  kv("dir", cfg.out_dir);
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t config_hash(const ScenarioConfig& cfg) {
  // The hash identifies the computation, so the output directory (which
  // affects no computed number) is pinned before hashing.
  ScenarioConfig c = cfg;
  c.out_dir = "out";
  return fnv1a64(serialize_config(c));
}

SolverConfig ScenarioConfig::solver_config() const {
  SolverConfig sc;
  sc.tolerance = tolerance;
  sc.max_outer = max_outer;
  sc.max_inner = max_inner;
  sc.delta0 = delta0;
  sc.delta_factor = delta_factor;
  sc.delta_floor = delta_floor;
  sc.epsilon = epsilon;
  sc.damping = damping;
  sc.tie_break = tie_break == "contact" ? TieBreak::PreferContact
                                        : TieBreak::PreferPde;
  sc.contact_tol = contact_tol;
  return sc;
}

namespace {

ScalarField field_from_expr(const Grid& g, const std::string& key,
                            const std::string& text) {
  Expr e;
  try {
    e = Expr::parse(text);
  } catch (const std::invalid_argument& err) {
    throw std::invalid_argument("config " + key + ": " + err.what());
  }
  if (g.dim == 1 && e.uses_x2())
    throw std::invalid_argument("config " + key +
                                ": expression uses x2 but the grid is one "
                                "dimensional");
  ScalarField out = field_from(g, [&e](double x1, double x2) { return e(x1, x2); });
  if (!out.all_finite())
    throw std::invalid_argument("config " + key +
                                ": expression evaluates to a non-finite value "
                                "on the grid");
  return out;
}

} // namespace

ProblemSpec build_problem(const ScenarioConfig& cfg) {
  if (cfg.dim != 1 && cfg.dim != 2)
    throw std::invalid_argument("config [grid] dim: expected 1 or 2");
  Grid grid;
  if (cfg.dim == 1) {
    grid = Grid::line(cfg.lo1, cfg.hi1, cfg.nodes1);
  } else {
    if (cfg.nodes2 < 3)
      throw std::invalid_argument(
          "config [grid] nodes2: a 2D grid needs nodes2 >= 3");
    grid = Grid::box(cfg.lo1, cfg.hi1, cfg.nodes1, cfg.lo2, cfg.hi2,
                     cfg.nodes2);
  }

  if (!(cfg.lambda > 0.0) || !(cfg.lambda <= cfg.Lambda))
    throw std::invalid_argument(
        "config [operator] lambda/Lambda: ellipticity requires 0 < lambda <= "
        "Lambda");

  auto member_of = [&](const std::array<std::string, 5>& c,
                       const std::string& tag) {
    LinearCoefficients lc;
    lc.a11 = field_from_expr(grid, "[operator] a11" + tag, c[0]);
    lc.a12 = field_from_expr(grid, "[operator] a12" + tag, c[1]);
    lc.a22 = field_from_expr(grid, "[operator] a22" + tag, c[2]);
    lc.b1 = field_from_expr(grid, "[operator] b1" + tag, c[3]);
    lc.b2 = field_from_expr(grid, "[operator] b2" + tag, c[4]);
    return lc;
  };

  OperatorSpec op;
  if (cfg.family == "linear") {
    op = OperatorSpec::linear(
        grid, member_of({cfg.a11, cfg.a12, cfg.a22, cfg.b1, cfg.b2}, ""),
        cfg.lambda, cfg.Lambda);
  } else if (cfg.family == "bellman_max") {
    if (cfg.member_coeffs.empty())
      throw std::invalid_argument(
          "config [operator] members: bellman_max needs at least one member");
    std::vector<LinearCoefficients> members;
    for (std::size_t m = 0; m < cfg.member_coeffs.size(); ++m)
      members.push_back(
          member_of(cfg.member_coeffs[m], "_" + std::to_string(m + 1)));
    op = OperatorSpec::bellman_max(grid, std::move(members), cfg.lambda,
                                   cfg.Lambda);
  } else if (cfg.family == "pucci_plus" || cfg.family == "pucci_minus") {
    ScalarField mu = field_from_expr(grid, "[operator] mu", cfg.mu);
    op = cfg.family == "pucci_plus"
             ? OperatorSpec::pucci_plus(grid, cfg.lambda, cfg.Lambda,
                                        std::move(mu))
             : OperatorSpec::pucci_minus(grid, cfg.lambda, cfg.Lambda,
                                         std::move(mu));
  } else {
    throw std::invalid_argument("config [operator] family: unknown family '" +
                                cfg.family + "'");
  }

  ExponentSet exponents;
  try {
    exponents = compute_exponents(cfg.dim, cfg.p, cfg.q, cfg.beta1);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("config [data] p/q/beta1: " +
                                std::string(e.what()));
  }

  std::optional<double> r0;
  if (cfg.r0 >= 0.0) r0 = cfg.r0;
  return make_problem(grid, std::move(op),
                      field_from_expr(grid, "[data] f", cfg.f),
                      field_from_expr(grid, "[data] phi", cfg.phi),
                      field_from_expr(grid, "[data] psi", cfg.psi),
                      field_from_expr(grid, "[data] g", cfg.g), exponents, r0);
}

} // namespace obstacle
