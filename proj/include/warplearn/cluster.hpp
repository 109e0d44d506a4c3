#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "warplearn/dtw.hpp"
#include "warplearn/elastic.hpp"
#include "warplearn/mean.hpp"
#include "warplearn/parallel.hpp"
#include "warplearn/types.hpp"

namespace warplearn {

struct Prototype {
  int label = 0;
  Matrix weights;
};

struct PrototypeSet {
  std::string mode;  // "kme", "ahc" or "mean"
  std::vector<Prototype> entries;
};

struct KMeansConfig {
  int max_rounds = 50;
  MeanConfig mean;
};

struct KMeansResult {
  std::vector<Matrix> centroids;
  std::vector<int> assignment;
  int rounds = 0;
  double total_variation = 0.0;
  std::vector<double> variation_trace;  // after each centroid update
};

// Symmetric pairwise DTW distance matrix. Rows are filled in parallel; the
// per-pair work is pure.
inline Matrix pairwise_dtw_matrix(const std::vector<TimeSeries>& data, int threads = 0) {
  const auto n = static_cast<Eigen::Index>(data.size());
  Matrix d = Matrix::Zero(n, n);
  parallel_for_units(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < data.size(); ++j)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          dtw_distance(data[i], data[j]);
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(j, i) = d(i, j);
  return d;
}

namespace detail {

// Deterministic farthest-point seeding over a distance matrix: the medoid
// first, then repeatedly the point farthest from the chosen set.
inline std::vector<std::size_t> farthest_point_seeds(const Matrix& dist, int k) {
  const auto n = static_cast<std::size_t>(dist.rows());
  std::vector<std::size_t> seeds;
  std::size_t first = 0;
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double sum = dist.row(static_cast<Eigen::Index>(i)).sum();
    if (sum < best_sum) {
      best_sum = sum;
      first = i;
    }
  }
  seeds.push_back(first);
  std::vector<double> min_dist(n);
  for (std::size_t i = 0; i < n; ++i)
    min_dist[i] = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(first));
  while (static_cast<int>(seeds.size()) < k) {
    std::size_t far = 0;
    double far_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (min_dist[i] > far_dist) {
        far_dist = min_dist[i];
        far = i;
      }
    }
    seeds.push_back(far);
    for (std::size_t i = 0; i < n; ++i)
      min_dist[i] = std::min(min_dist[i],
                             dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(far)));
  }
  return seeds;
}

}  // namespace detail

// Lloyd iterations under the elastic Euclidean distance: assign each series
// to the nearest centroid, then re-fit every centroid with warm-started mean
// updates. Empty clusters are reseeded with the series farthest from its
// assigned centroid. Total within-cluster variation never increases.
inline KMeansResult kmeans(const std::vector<TimeSeries>& data, int k,
                           const KMeansConfig& cfg = {}) {
  if (data.empty()) throw std::invalid_argument("kmeans: empty dataset");
  if (k < 1 || static_cast<std::size_t>(k) > data.size())
    throw std::invalid_argument("kmeans: k must be in [1, |data|]");
  std::size_t max_len = 0;
  for (const TimeSeries& x : data) max_len = std::max(max_len, x.size());
  const int n = static_cast<int>(max_len);
  const int m = cfg.mean.elasticity > 0 ? cfg.mean.elasticity : n;

  const Matrix dist = pairwise_dtw_matrix(data);
  const std::vector<std::size_t> seeds = detail::farthest_point_seeds(dist, k);

  KMeansResult result;
  result.centroids.reserve(static_cast<std::size_t>(k));
  for (const std::size_t s : seeds)
    result.centroids.push_back(identical_row_matrix(resample_linear(data[s], m), n));
  result.assignment.assign(data.size(), -1);

  std::vector<double> sq_dist(data.size(), 0.0);
  for (int round = 0; round < cfg.max_rounds; ++round) {
    // Assignment step; ties go to the lowest centroid index.
    std::vector<int> next(data.size(), -1);
    for (std::size_t i = 0; i < data.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double d = elastic_sq_euclidean(data[i], result.centroids[static_cast<std::size_t>(c)]);
        if (d < best) {
          best = d;
          best_c = c;
        }
      }
      next[i] = best_c;
      sq_dist[i] = best;
    }
    // Reseed empty clusters with the member farthest from its centroid.
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (const int c : next) ++counts[static_cast<std::size_t>(c)];
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      std::size_t far = 0;
      double far_dist = -1.0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (counts[static_cast<std::size_t>(next[i])] > 1 && sq_dist[i] > far_dist) {
          far_dist = sq_dist[i];
          far = i;
        }
      }
      --counts[static_cast<std::size_t>(next[far])];
      next[far] = c;
      ++counts[static_cast<std::size_t>(c)];
      result.centroids[static_cast<std::size_t>(c)] =
          identical_row_matrix(resample_linear(data[far], m), n);
      sq_dist[far] = elastic_sq_euclidean(data[far], result.centroids[static_cast<std::size_t>(c)]);
    }

    const bool stable = next == result.assignment;
    result.assignment = std::move(next);
    if (stable && round > 0) break;
    ++result.rounds;

    // Update step: warm-started mean iterations per cluster.
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
      std::vector<TimeSeries> members;
      for (std::size_t i = 0; i < data.size(); ++i)
        if (result.assignment[i] == c) members.push_back(data[i]);
      MeanState state =
          compute_mean_from(std::move(result.centroids[static_cast<std::size_t>(c)]), members,
                            cfg.mean);
      result.centroids[static_cast<std::size_t>(c)] = std::move(state.Y);
      total += state.variation;
    }
    result.variation_trace.push_back(total);
    result.total_variation = total;
  }
  return result;
}

// Agglomerative merge tree. Leaves are 0..N-1; merge t creates cluster
// N + t. `height` is the Ward criterion value (square root scale).
struct Merge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;
};

struct Dendrogram {
  int leaves = 0;
  std::vector<Merge> merges;

  // Leaf indices under a node id (leaf ids map to themselves).
  std::vector<int> members(int node) const {
    if (node < leaves) return {node};
    const Merge& m = merges[static_cast<std::size_t>(node - leaves)];
    std::vector<int> out = members(m.left);
    const std::vector<int> right = members(m.right);
    out.insert(out.end(), right.begin(), right.end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

// Ward linkage over a precomputed distance matrix via the Lance-Williams
// recurrence on squared distances. Ties pick the lexicographically smallest
// cluster-id pair.
inline Dendrogram ward_linkage(const Matrix& dist) {
  const int n = static_cast<int>(dist.rows());
  if (n < 1 || dist.rows() != dist.cols())
    throw std::invalid_argument("ward_linkage: distance matrix must be square and non-empty");
  Dendrogram tree;
  tree.leaves = n;
  if (n == 1) return tree;

  std::vector<int> ids;          // active cluster ids
  std::vector<int> sizes;        // aligned with ids
  std::vector<std::vector<double>> d2(static_cast<std::size_t>(n),
                                      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    ids.push_back(i);
    sizes.push_back(1);
    for (int j = 0; j < n; ++j) d2[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
        dist(i, j) * dist(i, j);
  }

  for (int t = 0; t < n - 1; ++t) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        if (d2[a][b] < best) {
          best = d2[a][b];
          bi = a;
          bj = b;
        }
      }
    }
    const int na = sizes[bi], nb = sizes[bj];
    Merge merge{ids[bi], ids[bj], std::sqrt(best), na + nb};
    // Lance-Williams update for Ward linkage.
    for (std::size_t c = 0; c < ids.size(); ++c) {
      if (c == bi || c == bj) continue;
      const double nc = sizes[c];
      const double updated = ((na + nc) * d2[bi][c] + (nb + nc) * d2[bj][c] - nc * best) /
                             (na + nb + nc);
      d2[bi][c] = updated;
      d2[c][bi] = updated;
    }
    ids[bi] = n + t;
    sizes[bi] = na + nb;
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(bj));
    sizes.erase(sizes.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& row : d2) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
    d2.erase(d2.begin() + static_cast<std::ptrdiff_t>(bj));
    tree.merges.push_back(merge);
  }
  return tree;
}

namespace detail {

inline std::map<int, std::vector<TimeSeries>> split_by_label(
    const std::vector<LabeledSeries>& data) {
  std::map<int, std::vector<TimeSeries>> by_label;
  for (const LabeledSeries& ex : data) by_label[ex.label].push_back(ex.values);
  return by_label;
}

}  // namespace detail

// One prototype per class via the DTW-space mean (k-means with k = 1 per
// class).
inline PrototypeSet kme_prototypes(const std::vector<LabeledSeries>& data,
                                   const MeanConfig& cfg = {}) {
  if (data.empty()) throw std::invalid_argument("kme_prototypes: empty dataset");
  PrototypeSet out;
  out.mode = "kme";
  for (auto& [label, members] : detail::split_by_label(data))
    out.entries.push_back({label, compute_mean(members, cfg).Y});
  return out;
}

// Prototype of a dendrogram node: the DTW-space mean over the node's member
// series. Merged clusters therefore average exactly the series their merge
// gathered, and the root prototype is the mean of the whole set.
inline Matrix node_prototype(const Dendrogram& tree, int node,
                             const std::vector<TimeSeries>& leaves, const MeanConfig& cfg = {}) {
  std::vector<TimeSeries> members;
  for (const int idx : tree.members(node)) members.push_back(leaves[static_cast<std::size_t>(idx)]);
  return compute_mean(members, cfg).Y;
}

// One prototype per class from agglomerative averaging: a Ward dendrogram
// over the pairwise DTW matrix fixes the merge order, and the class
// prototype is the root node's.
inline PrototypeSet ahc_prototypes(const std::vector<LabeledSeries>& data,
                                   const MeanConfig& cfg = {}) {
  if (data.empty()) throw std::invalid_argument("ahc_prototypes: empty dataset");
  PrototypeSet out;
  out.mode = "ahc";
  for (auto& [label, members] : detail::split_by_label(data)) {
    const Dendrogram tree = ward_linkage(pairwise_dtw_matrix(members));
    const int root = tree.leaves + static_cast<int>(tree.merges.size()) - 1;
    out.entries.push_back({label, node_prototype(tree, root, members, cfg)});
  }
  return out;
}

}  // namespace warplearn
