#pragma once

#include <functional>
#include <string>

namespace obstacle {

// Arithmetic expressions over grid coordinates, used for operator
// coefficients and problem data in config files.  Supported surface:
//   + - * / ^ (right associative, binds tighter than unary minus)
//   abs, sqrt, exp, sin, cos, pow, min, max
//   identifiers x1, x2, x (alias of x1), pi
// Parsing is total: any input yields a value or an invalid_argument whose
// message points at the offending position.
class Expr {
 public:
  Expr() = default;

  static Expr parse(const std::string& text);

  double operator()(double x1, double x2 = 0.0) const;

  bool valid() const { return static_cast<bool>(fn_); }
  bool uses_x2() const { return uses_x2_; }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::function<double(double, double)> fn_;
  bool uses_x2_ = false;
};

} // namespace obstacle
