#include "obstacle/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace obstacle {

namespace {

using Fn = std::function<double(double, double)>;

struct Parser {
  const std::string& s;
  std::size_t i = 0;
  bool uses_x2 = false;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression '" + s + "': " + what +
                               " at position " + std::to_string(i));
  }

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  Fn parse_expr() {
    Fn lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        Fn rhs = parse_term();
        lhs = [lhs, rhs](double a, double b) { return lhs(a, b) + rhs(a, b); };
      } else if (eat('-')) {
        Fn rhs = parse_term();
        lhs = [lhs, rhs](double a, double b) { return lhs(a, b) - rhs(a, b); };
      } else {
        return lhs;
      }
    }
  }

  Fn parse_term() {
    Fn lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        Fn rhs = parse_unary();
        lhs = [lhs, rhs](double a, double b) { return lhs(a, b) * rhs(a, b); };
      } else if (eat('/')) {
        Fn rhs = parse_unary();
        lhs = [lhs, rhs](double a, double b) { return lhs(a, b) / rhs(a, b); };
      } else {
        return lhs;
      }
    }
  }

  Fn parse_unary() {
    if (eat('-')) {
      Fn inner = parse_unary();
      return [inner](double a, double b) { return -inner(a, b); };
    }
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  Fn parse_power() {
    Fn base = parse_atom();
    if (eat('^')) {
      // exponent may itself carry a sign: x^-2
      Fn exp = parse_unary();
      return [base, exp](double a, double b) {
        return std::pow(base(a, b), exp(a, b));
      };
    }
    return base;
  }

  Fn parse_atom() {
    skip_ws();
    if (i >= s.size()) fail("unexpected end of expression");
    const char c = s[i];
    if (c == '(') {
      ++i;
      Fn inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < s.size() &&
         std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  Fn parse_number() {
    const char* begin = s.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    i += static_cast<std::size_t>(end - begin);
    return [v](double, double) { return v; };
  }

  Fn parse_ident() {
    const std::size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                            s[i] == '_'))
      ++i;
    const std::string name = s.substr(start, i - start);

    if (name == "x1" || name == "x")
      return [](double a, double) { return a; };
    if (name == "x2") {
      uses_x2 = true;
      return [](double, double b) { return b; };
    }
    if (name == "pi")
      return [](double, double) { return 3.14159265358979323846; };

    if (peek() != '(') {
      i = start;
      fail("unknown identifier '" + name + "' (expected x1, x2, x, or pi)");
    }

    if (name == "abs") return unary_fn(name, [](double v) { return std::abs(v); });
    if (name == "sqrt") return unary_fn(name, [](double v) { return std::sqrt(v); });
    if (name == "exp") return unary_fn(name, [](double v) { return std::exp(v); });
    if (name == "sin") return unary_fn(name, [](double v) { return std::sin(v); });
    if (name == "cos") return unary_fn(name, [](double v) { return std::cos(v); });
    if (name == "min")
      return binary_fn(name, [](double u, double v) { return std::fmin(u, v); });
    if (name == "max")
      return binary_fn(name, [](double u, double v) { return std::fmax(u, v); });
    if (name == "pow")
      return binary_fn(name, [](double u, double v) { return std::pow(u, v); });

    i = start;
    fail("unknown function '" + name + "'");
  }

  Fn unary_fn(const std::string& name, double (*op)(double)) {
    if (!eat('(')) fail("'" + name + "' expects '('");
    Fn arg = parse_expr();
    if (!eat(')')) fail("'" + name + "' expects 1 argument");
    return [arg, op](double a, double b) { return op(arg(a, b)); };
  }

  Fn binary_fn(const std::string& name, double (*op)(double, double)) {
    if (!eat('(')) fail("'" + name + "' expects '('");
    Fn u = parse_expr();
    if (!eat(',')) fail("'" + name + "' expects 2 arguments");
    Fn v = parse_expr();
    if (!eat(')')) fail("'" + name + "' expects ')'");
    return [u, v, op](double a, double b) { return op(u(a, b), v(a, b)); };
  }
};

} // namespace

Expr Expr::parse(const std::string& text) {
  Parser p{text};
  Fn fn = p.parse_expr();
  p.skip_ws();
  if (p.i != text.size()) p.fail("unexpected trailing input");
  Expr e;
  e.text_ = text;
  e.fn_ = std::move(fn);
  e.uses_x2_ = p.uses_x2;
  return e;
}

double Expr::operator()(double x1, double x2) const {
  if (!fn_) throw std::logic_error("evaluating a default-constructed Expr");
  return fn_(x1, x2);
}

} // namespace obstacle
