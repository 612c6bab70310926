#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace obstacle {

// Execution mode for the hot kernels.  Every parallel kernel in this library
// has a serial twin; the two must produce bitwise identical results so that
// test runs and production runs cannot drift apart.  Parallel reductions are
// therefore organised as fixed-size blocks combined in index order, never as
// an unordered atomic accumulation.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Block width for deterministic sum reductions.  Fixed once; changing it
// changes the rounding pattern of every blocked sum, so it is part of the
// numerical contract, not a tuning knob.
inline constexpr std::size_t kSumBlock = 1024;

// Sum of f(i) for i in [0, n), accumulated per block and then combined left
// to right.  Both execution modes run the same block decomposition, so the
// serial and parallel results are bitwise identical, and the parallel result
// is independent of the thread count because each block is summed serially
// and the block partials are merged in block order.
template <class F>
double blocked_sum(std::size_t n, Exec ex, F&& f) {
  const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  if (nblocks <= 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += f(i);
    return acc;
  }
  std::vector<double> partial(nblocks, 0.0);
  const auto sum_block = [n, &f](std::size_t b) {
    const std::size_t lo = b * kSumBlock;
    const std::size_t hi = lo + kSumBlock < n ? lo + kSumBlock : n;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += f(i);
    return acc;
  };
  if (ex == Exec::Serial) {
    for (std::size_t b = 0; b < nblocks; ++b) partial[b] = sum_block(b);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b)
      partial[static_cast<std::size_t>(b)] = sum_block(static_cast<std::size_t>(b));
  }
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

// Max of f(i) over [0, n).  max is associative and commutative over doubles
// (no NaN inputs expected), so a plain per-thread reduction is already
// deterministic; we still merge per-block for symmetry with blocked_sum.
template <class F>
double blocked_max(std::size_t n, Exec ex, double init, F&& f) {
  const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  if (nblocks <= 1) {
    double m = init;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = f(i);
      if (v > m) m = v;
    }
    return m;
  }
  std::vector<double> partial(nblocks, init);
  const auto max_block = [n, init, &f](std::size_t b) {
    const std::size_t lo = b * kSumBlock;
    const std::size_t hi = lo + kSumBlock < n ? lo + kSumBlock : n;
    double m = init;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = f(i);
      if (v > m) m = v;
    }
    return m;
  };
  if (ex == Exec::Serial) {
    for (std::size_t b = 0; b < nblocks; ++b) partial[b] = max_block(b);
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b)
      partial[static_cast<std::size_t>(b)] = max_block(static_cast<std::size_t>(b));
  }
  double m = init;
  for (double p : partial) if (p > m) m = p;
  return m;
}

// Per-index map: out[i] = f(i).  Embarrassingly parallel, no reduction, so
// serial and parallel results are bitwise identical by construction.
template <class F>
void parallel_map(std::size_t n, Exec ex, F&& f) {
  if (ex == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    f(static_cast<std::size_t>(i));
}

} // namespace obstacle
