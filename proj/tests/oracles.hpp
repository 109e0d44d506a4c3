#pragma once

// Brute-force reference computations for the dynamic programs. Everything
// here goes through explicit path enumeration and plain sums; none of it
// shares code with the recurrences under test.

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include <warplearn/elastic.hpp>
#include <warplearn/rng.hpp>
#include <warplearn/types.hpp>
#include <warplearn/warping.hpp>

namespace oracles {

using warplearn::GridDims;
using warplearn::Matrix;
using warplearn::PathPoint;
using warplearn::TimeSeries;
using warplearn::WarpingPath;

inline bool matrices_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

inline double path_sq_cost(const TimeSeries& x, const TimeSeries& y, const WarpingPath& path) {
  double total = 0.0;
  for (const PathPoint& p : path.points) {
    const double d = x[static_cast<std::size_t>(p.i - 1)] - y[static_cast<std::size_t>(p.j - 1)];
    total += d * d;
  }
  return total;
}

// Minimum summed squared cost over every warping path.
inline double brute_dtw_sq(const TimeSeries& x, const TimeSeries& y) {
  const auto paths = warplearn::enumerate_warping_paths(
      {static_cast<int>(x.size()), static_cast<int>(y.size())});
  double best = std::numeric_limits<double>::infinity();
  for (const WarpingPath& p : paths) best = std::min(best, path_sq_cost(x, y, p));
  return best;
}

inline double path_inner(const TimeSeries& x, const Matrix& W, const WarpingPath& path) {
  double total = 0.0;
  for (const PathPoint& p : path.points)
    total += x[static_cast<std::size_t>(p.i - 1)] * W(p.i - 1, p.j - 1);
  return total;
}

// Max over every warping path of <x (x) 0, W>, plus how many paths attain
// it within `tie_tol` (for smoothness probes).
struct BruteInner {
  double value = 0.0;
  WarpingPath best_path;
  int ties = 0;
};

inline BruteInner brute_inner(const TimeSeries& x, const Matrix& W, double tie_tol = 1e-9) {
  const auto paths = warplearn::enumerate_warping_paths(
      {static_cast<int>(x.size()), static_cast<int>(W.cols())});
  BruteInner out;
  out.value = -std::numeric_limits<double>::infinity();
  for (const WarpingPath& p : paths) {
    const double v = path_inner(x, W, p);
    if (v > out.value) {
      out.value = v;
      out.best_path = p;
    }
  }
  for (const WarpingPath& p : paths)
    if (path_inner(x, W, p) >= out.value - tie_tol) ++out.ties;
  return out;
}

inline double path_elastic_sq(const TimeSeries& x, const Matrix& Y, const WarpingPath& path) {
  double total = 0.0;
  for (const PathPoint& p : path.points) {
    const double d = x[static_cast<std::size_t>(p.i - 1)] - Y(p.i - 1, p.j - 1);
    total += d * d;
  }
  return total;
}

inline double brute_elastic_sq(const TimeSeries& x, const Matrix& Y) {
  const auto paths = warplearn::enumerate_warping_paths(
      {static_cast<int>(x.size()), static_cast<int>(Y.cols())});
  double best = std::numeric_limits<double>::infinity();
  for (const WarpingPath& p : paths) best = std::min(best, path_elastic_sq(x, Y, p));
  return best;
}

inline TimeSeries random_series(std::mt19937_64& rng, int len, double lo = -2.0, double hi = 2.0) {
  TimeSeries out(static_cast<std::size_t>(len));
  for (double& v : out) v = warplearn::uniform_in(rng, lo, hi);
  return out;
}

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols, double lo = -2.0,
                            double hi = 2.0) {
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = warplearn::uniform_in(rng, lo, hi);
  return out;
}

}  // namespace oracles
