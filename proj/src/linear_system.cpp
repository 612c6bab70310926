#include "obstacle/linear_system.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace obstacle {

std::vector<double> solve_tridiagonal(std::vector<double> sub,
                                      std::vector<double> diag,
                                      std::vector<double> sup,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (sub.size() != n || sup.size() != n || rhs.size() != n)
    throw std::invalid_argument("solve_tridiagonal: band size mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0)
      throw std::runtime_error("solve_tridiagonal: zero pivot");
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (diag[n - 1] == 0.0)
    throw std::runtime_error("solve_tridiagonal: zero pivot");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

std::vector<double> solve_rows(const std::vector<RowData>& rows,
                               bool tridiagonal) {
  const std::size_t n = rows.size();
  if (tridiagonal) {
    std::vector<double> sub(n, 0.0), diag(n), sup(n, 0.0), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      diag[i] = rows[i].diag;
      rhs[i] = rows[i].rhs;
      for (int e = 0; e < rows[i].noff; ++e) {
        const auto [c, v] = rows[i].off[e];
        if (c + 1 == i)
          sub[i] = v;
        else if (c == i + 1)
          sup[i] = v;
        else
          throw std::invalid_argument("solve_rows: row set is not tridiagonal");
      }
    }
    return solve_tridiagonal(std::move(sub), std::move(diag), std::move(sup),
                             std::move(rhs));
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * n);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<int>(i);
    trips.emplace_back(ii, ii, rows[i].diag);
    for (int e = 0; e < rows[i].noff; ++e)
      trips.emplace_back(ii, static_cast<int>(rows[i].off[e].first),
                         rows[i].off[e].second);
    b[ii] = rows[i].rhs;
  }
  Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n));
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_rows: sparse factorization failed (singular system?)");
  const Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_rows: sparse solve failed");
  return std::vector<double>(x.data(), x.data() + x.size());
}

} // namespace obstacle
