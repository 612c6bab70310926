#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

namespace obstacle {

// One assembled row: implicit row index = position in the vector.  Off
// entries stay within the 9-point stencil so a fixed-size array suffices.
struct RowData {
  double diag = 0.0;
  double rhs = 0.0;
  std::array<std::pair<std::size_t, double>, 8> off{};
  int noff = 0;

  void add(std::size_t col, double coef) {
    if (coef == 0.0) return;
    for (int i = 0; i < noff; ++i)
      if (off[i].first == col) {
        off[i].second += coef;
        return;
      }
    off[noff++] = {col, coef};
  }
};

// Thomas elimination for a tridiagonal system; sub[0] and sup[n-1] are
// ignored.  Throws on a vanishing pivot.
std::vector<double> solve_tridiagonal(std::vector<double> sub,
                                      std::vector<double> diag,
                                      std::vector<double> sup,
                                      std::vector<double> rhs);

// Direct solve of the assembled rows.  One-dimensional row sets (neighbors
// only at +-1) go through Thomas elimination; anything else through a
// sparse LU factorization.  Throws std::runtime_error on singular systems.
std::vector<double> solve_rows(const std::vector<RowData>& rows,
                               bool tridiagonal);

} // namespace obstacle
