#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "warplearn/dtw.hpp"
#include "warplearn/types.hpp"
#include "warplearn/warping.hpp"

namespace warplearn {

// The parameter space: dense real n x m matrices. n is the maximum training
// series length, m is the elasticity (column count).
using Matrix = Eigen::MatrixXd;

// Optional instrumentation for the DP kernels; `cells` counts recurrence
// updates, which must equal k*m per evaluation.
struct EvalCounters {
  std::size_t cells = 0;
};

// Elastic linear function parameters: weight matrix plus bias.
struct ElasticParams {
  Matrix W;
  double b = 0.0;

  int rows() const { return static_cast<int>(W.rows()); }
  int cols() const { return static_cast<int>(W.cols()); }
};

struct ScoredPath {
  double value = 0.0;
  WarpingPath path;
};

struct ElasticDistance {
  double distance = 0.0;
  WarpingPath path;
};

namespace detail {

inline void check_embeddable(const TimeSeries& x, const Matrix& Z, const char* what) {
  if (x.empty()) throw std::invalid_argument(std::string(what) + ": series must be non-empty");
  if (static_cast<Eigen::Index>(x.size()) > Z.rows())
    throw std::invalid_argument(std::string(what) + ": series length " +
                                std::to_string(x.size()) + " exceeds matrix rows " +
                                std::to_string(Z.rows()));
}

}  // namespace detail

// Embeds x into Z along `path`: cells on the path are overwritten with the
// corresponding sample of x, everything else is copied from Z.
inline Matrix embed(const TimeSeries& x, const Matrix& Z, const WarpingPath& path) {
  detail::check_embeddable(x, Z, "embed");
  const GridDims dims{static_cast<int>(x.size()), static_cast<int>(Z.cols())};
  if (!validate_path(path, dims))
    throw std::invalid_argument("embed: path is not a valid warping path for grid " +
                                std::to_string(dims.rows) + "x" + std::to_string(dims.cols));
  Matrix out = Z;
  for (const PathPoint& p : path.points)
    out(p.i - 1, p.j - 1) = x[static_cast<std::size_t>(p.i - 1)];
  return out;
}

// All-rows-equal matrix; embedding into it reduces elastic distances to the
// plain DTW distance against the row series.
inline Matrix identical_row_matrix(const TimeSeries& z, int rows) {
  if (z.empty()) throw std::invalid_argument("identical_row_matrix: row series must be non-empty");
  if (rows < 1) throw std::invalid_argument("identical_row_matrix: rows must be positive");
  Matrix out(rows, static_cast<Eigen::Index>(z.size()));
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    out.col(j).setConstant(z[static_cast<std::size_t>(j)]);
  return out;
}

// Maximum over warping paths of <x (x) 0, W>, computed by the score
// recurrence s_ij = x_i w_ij + max{s_(i-1)j, s_i(j-1), s_(i-1)(j-1)}.
// Rolling two-row evaluation, O(m) space.
inline double elastic_inner_product(const TimeSeries& x, const Matrix& W,
                                    EvalCounters* counters = nullptr) {
  detail::check_embeddable(x, W, "elastic_inner_product");
  const int k = static_cast<int>(x.size());
  const int m = static_cast<int>(W.cols());
  std::vector<double> prev(static_cast<std::size_t>(m));
  std::vector<double> curr(static_cast<std::size_t>(m));
  for (int i = 0; i < k; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const double local = xi * W(i, j);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = curr[static_cast<std::size_t>(j - 1)];
      } else if (j == 0) {
        best = prev[0];
      } else {
        best = std::max({prev[static_cast<std::size_t>(j)], curr[static_cast<std::size_t>(j - 1)],
                         prev[static_cast<std::size_t>(j - 1)]});
      }
      curr[static_cast<std::size_t>(j)] = local + best;
      if (counters) ++counters->cells;
    }
    std::swap(prev, curr);
  }
  return prev[static_cast<std::size_t>(m - 1)];
}

// Full k x m score matrix of the inner-product recurrence, kept when a
// traceback is needed.
inline std::vector<std::vector<double>> inner_product_scores(const TimeSeries& x,
                                                             const Matrix& W) {
  detail::check_embeddable(x, W, "inner_product_scores");
  const int k = static_cast<int>(x.size());
  const int m = static_cast<int>(W.cols());
  std::vector<std::vector<double>> s(static_cast<std::size_t>(k),
                                     std::vector<double>(static_cast<std::size_t>(m)));
  for (int i = 0; i < k; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const double local = xi * W(i, j);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = s[0][static_cast<std::size_t>(j - 1)];
      } else if (j == 0) {
        best = s[static_cast<std::size_t>(i - 1)][0];
      } else {
        best = std::max({s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)],
                         s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)],
                         s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]});
      }
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = local + best;
    }
  }
  return s;
}

// Inner product plus an active path attaining it.
inline ScoredPath elastic_inner_product_with_path(const TimeSeries& x, const Matrix& W) {
  const auto s = inner_product_scores(x, W);
  ScoredPath out;
  out.value = s.back().back();
  out.path = detail::traceback_scores(s, [](double a, double b) { return a >= b; });
  return out;
}

// Squared elastic Euclidean distance: minimum over warping paths of the
// summed squared costs (x_i - y_ij)^2. Rolling evaluation.
inline double elastic_sq_euclidean(const TimeSeries& x, const Matrix& Y,
                                   EvalCounters* counters = nullptr) {
  detail::check_embeddable(x, Y, "elastic_sq_euclidean");
  const int k = static_cast<int>(x.size());
  const int m = static_cast<int>(Y.cols());
  std::vector<double> prev(static_cast<std::size_t>(m));
  std::vector<double> curr(static_cast<std::size_t>(m));
  for (int i = 0; i < k; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const double local = detail::sq(xi - Y(i, j));
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = curr[static_cast<std::size_t>(j - 1)];
      } else if (j == 0) {
        best = prev[0];
      } else {
        best = std::min({prev[static_cast<std::size_t>(j)], curr[static_cast<std::size_t>(j - 1)],
                         prev[static_cast<std::size_t>(j - 1)]});
      }
      curr[static_cast<std::size_t>(j)] = local + best;
      if (counters) ++counters->cells;
    }
    std::swap(prev, curr);
  }
  return prev[static_cast<std::size_t>(m - 1)];
}

inline double elastic_euclidean_distance(const TimeSeries& x, const Matrix& Y,
                                         EvalCounters* counters = nullptr) {
  return std::sqrt(elastic_sq_euclidean(x, Y, counters));
}

inline std::vector<std::vector<double>> sq_euclidean_scores(const TimeSeries& x, const Matrix& Y) {
  detail::check_embeddable(x, Y, "sq_euclidean_scores");
  const int k = static_cast<int>(x.size());
  const int m = static_cast<int>(Y.cols());
  std::vector<std::vector<double>> s(static_cast<std::size_t>(k),
                                     std::vector<double>(static_cast<std::size_t>(m)));
  for (int i = 0; i < k; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < m; ++j) {
      const double local = detail::sq(xi - Y(i, j));
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = s[0][static_cast<std::size_t>(j - 1)];
      } else if (j == 0) {
        best = s[static_cast<std::size_t>(i - 1)][0];
      } else {
        best = std::min({s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)],
                         s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)],
                         s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]});
      }
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = local + best;
    }
  }
  return s;
}

// Elastic Euclidean distance ||x (x) Y - Y|| plus an active (minimizing)
// path. Only on-path cells contribute to the distance.
inline ElasticDistance elastic_euclidean(const TimeSeries& x, const Matrix& Y) {
  const auto s = sq_euclidean_scores(x, Y);
  ElasticDistance out;
  out.distance = std::sqrt(s.back().back());
  out.path = detail::traceback_scores(s, [](double a, double b) { return a <= b; });
  return out;
}

// f(x) = b + max over paths of <x (x) 0, W>.
inline double elastic_linear(const TimeSeries& x, const ElasticParams& theta) {
  return theta.b + elastic_inner_product(x, theta.W);
}

}  // namespace warplearn
