#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "warplearn/dtw.hpp"
#include "warplearn/elastic.hpp"
#include "warplearn/types.hpp"

namespace warplearn {

struct MeanConfig {
  int elasticity = 0;    // columns of the mean matrix; 0 -> max series length
  double eta = 0.0;      // step size; 0 -> 1/N (the exact-averaging rule)
  int max_iters = 100;
  double tol = 1e-6;     // stop when |F_t - F_{t+1}| <= tol * max(1, F_t)
};

struct MeanState {
  Matrix Y;
  double variation = 0.0;
  int iterations = 0;
};

// Sum over the set of squared elastic Euclidean distances to Y. Empty sets
// have variation 0.
inline double variation(const Matrix& Y, const std::vector<TimeSeries>& data) {
  double total = 0.0;
  for (const TimeSeries& x : data) total += elastic_sq_euclidean(x, Y);
  return total;
}

// Linear resampling of x onto `m` evenly spaced positions.
inline TimeSeries resample_linear(const TimeSeries& x, int m) {
  if (x.empty()) throw std::invalid_argument("resample_linear: series must be non-empty");
  if (m < 1) throw std::invalid_argument("resample_linear: target length must be positive");
  const std::size_t k = x.size();
  TimeSeries out(static_cast<std::size_t>(m));
  if (k == 1) {
    std::fill(out.begin(), out.end(), x[0]);
    return out;
  }
  for (int j = 0; j < m; ++j) {
    const double t = m == 1 ? static_cast<double>(k - 1) / 2.0
                            : static_cast<double>(j) * static_cast<double>(k - 1) /
                                  static_cast<double>(m - 1);
    const auto lo = static_cast<std::size_t>(t);
    const std::size_t hi = std::min(lo + 1, k - 1);
    const double frac = t - static_cast<double>(lo);
    out[static_cast<std::size_t>(j)] = x[lo] * (1.0 - frac) + x[hi] * frac;
  }
  return out;
}

// Index of the series minimizing the summed DTW distance to the others.
// Ties go to the smallest index.
inline std::size_t medoid_index(const std::vector<TimeSeries>& data) {
  if (data.empty()) throw std::invalid_argument("medoid_index: empty dataset");
  std::size_t best = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < data.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j)
      if (i != j) sum += dtw_distance(data[i], data[j]);
    if (sum < best_sum) {
      best_sum = sum;
      best = i;
    }
  }
  return best;
}

// One generalized gradient step Y' = Y + eta * sum_i (X_i - Y), where X_i
// embeds x_i into Y along an active path of the elastic Euclidean distance.
// When eta equals 1/N the update is evaluated in its exact averaging form
// Y' = (1/N) sum_i X_i, so covered cells take the embedded values without
// rounding drift.
inline Matrix mean_step(const Matrix& Y, const std::vector<TimeSeries>& data, double eta) {
  if (data.empty()) throw std::invalid_argument("mean_step: empty dataset");
  const auto N = static_cast<double>(data.size());
  if (std::abs(eta * N - 1.0) < 1e-12) {
    Matrix sums = Matrix::Zero(Y.rows(), Y.cols());
    Matrix covered = Matrix::Zero(Y.rows(), Y.cols());
    for (const TimeSeries& x : data) {
      const ElasticDistance d = elastic_euclidean(x, Y);
      for (const PathPoint& p : d.path.points) {
        sums(p.i - 1, p.j - 1) += x[static_cast<std::size_t>(p.i - 1)];
        covered(p.i - 1, p.j - 1) += 1.0;
      }
    }
    Matrix next(Y.rows(), Y.cols());
    for (Eigen::Index i = 0; i < Y.rows(); ++i)
      for (Eigen::Index j = 0; j < Y.cols(); ++j)
        next(i, j) = (sums(i, j) + (N - covered(i, j)) * Y(i, j)) / N;
    return next;
  }
  Matrix delta = Matrix::Zero(Y.rows(), Y.cols());
  for (const TimeSeries& x : data) {
    const ElasticDistance d = elastic_euclidean(x, Y);
    for (const PathPoint& p : d.path.points)
      delta(p.i - 1, p.j - 1) += x[static_cast<std::size_t>(p.i - 1)] - Y(p.i - 1, p.j - 1);
  }
  return Y + eta * delta;
}

// Iterates mean_step from a caller-provided start until the variation
// stabilizes. Used directly for warm starts (k-means centroid updates).
inline MeanState compute_mean_from(Matrix Y, const std::vector<TimeSeries>& data,
                                   const MeanConfig& cfg = {}) {
  if (data.empty()) throw std::invalid_argument("compute_mean: empty dataset");
  const double eta = cfg.eta > 0.0 ? cfg.eta : 1.0 / static_cast<double>(data.size());
  double f_prev = variation(Y, data);
  int it = 0;
  while (it < cfg.max_iters) {
    Y = mean_step(Y, data, eta);
    ++it;
    const double f = variation(Y, data);
    const bool converged = std::abs(f_prev - f) <= cfg.tol * std::max(1.0, f_prev);
    f_prev = f;
    if (converged) break;
  }
  return {std::move(Y), f_prev, it};
}

// DTW-space mean: starts from the identical-row matrix of the medoid
// (resampled to the elasticity) and iterates the averaging update.
inline MeanState compute_mean(const std::vector<TimeSeries>& data, const MeanConfig& cfg = {}) {
  if (data.empty()) throw std::invalid_argument("compute_mean: empty dataset");
  std::size_t max_len = 0;
  for (const TimeSeries& x : data) {
    if (x.empty()) throw std::invalid_argument("compute_mean: series must be non-empty");
    max_len = std::max(max_len, x.size());
  }
  const int n = static_cast<int>(max_len);
  const int m = cfg.elasticity > 0 ? cfg.elasticity : n;
  const TimeSeries seed = resample_linear(data[medoid_index(data)], m);
  return compute_mean_from(identical_row_matrix(seed, n), data, cfg);
}

}  // namespace warplearn
