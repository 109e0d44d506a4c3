#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "warplearn/classifier.hpp"
#include "warplearn/dataset.hpp"
#include "warplearn/errors.hpp"
#include "warplearn/parallel.hpp"
#include "warplearn/rng.hpp"

namespace warplearn {

struct Fold {
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
};

// Model-selection folds: 10 stratified folds when N > 30, leave-one-out
// otherwise.
inline std::vector<Fold> make_folds(const Dataset& ds, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (n < 2) throw std::invalid_argument("make_folds: need at least 2 examples");

  std::vector<Fold> folds;
  if (n <= 30) {
    folds.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      folds[i].val_idx.push_back(i);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) folds[i].train_idx.push_back(j);
    }
    return folds;
  }

  constexpr std::size_t k = 10;
  folds.resize(k);
  // Deal each class round-robin after a seeded shuffle, keeping class ratios
  // within one example per fold.
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < n; ++i) by_label[ds.examples[i].label].push_back(i);
  std::mt19937_64 rng(seed);
  std::size_t offset = 0;
  for (auto& [label, idx] : by_label) {
    deterministic_shuffle(idx, rng);
    for (std::size_t p = 0; p < idx.size(); ++p)
      folds[(offset + p) % k].val_idx.push_back(idx[p]);
    offset += idx.size();
  }
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(folds[f].val_idx.begin(), folds[f].val_idx.end());
    std::vector<bool> in_val(n, false);
    for (const std::size_t i : folds[f].val_idx) in_val[i] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_val[i]) folds[f].train_idx.push_back(i);
  }
  return folds;
}

// Hyperparameter value sets used for model selection.
inline std::vector<double> default_eta_grid() {
  std::vector<double> out;
  for (int e = -10; e <= 0; ++e) out.push_back(std::ldexp(1.0, e));
  return out;
}

inline std::vector<double> default_margin_grid() {
  return {1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1e0, 1e1};
}

inline std::vector<double> default_lambda_grid() {
  std::vector<double> out;
  for (int e = -10; e <= -1; ++e) out.push_back(std::ldexp(1.0, e));
  return out;
}

// Value sets for the elasticity sweep.
inline std::vector<double> sweep_ratio_grid() {
  return {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0, 2.0, 3.0};
}

inline std::vector<double> sweep_eta_grid() {
  return {1.0, 0.7, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001};
}

// Cartesian hyperparameter grid; losses ignore axes that do not apply.
struct GridSpec {
  std::vector<double> etas;
  std::vector<double> margins = {0.0};
  std::vector<double> lambdas = {0.0};
};

inline GridSpec default_grid(LossKind kind) {
  GridSpec g;
  g.etas = default_eta_grid();
  if (kind == LossKind::margin_perceptron) g.margins = default_margin_grid();
  if (kind == LossKind::linear_svm) g.lambdas = default_lambda_grid();
  return g;
}

// Grid points in (eta, margin/lambda) ascending order, so a first-strictly-
// better scan realizes the documented tie-breaking.
inline std::vector<Hyperparams> grid_points(const GridSpec& grid, const Hyperparams& base) {
  if (grid.etas.empty() || grid.margins.empty() || grid.lambdas.empty())
    throw std::invalid_argument("grid_points: grids must be non-empty");
  std::vector<double> etas = grid.etas, margins = grid.margins, lambdas = grid.lambdas;
  std::sort(etas.begin(), etas.end());
  std::sort(margins.begin(), margins.end());
  std::sort(lambdas.begin(), lambdas.end());
  std::vector<Hyperparams> out;
  for (const double eta : etas) {
    for (const double margin : margins) {
      for (const double lambda : lambdas) {
        Hyperparams hp = base;
        hp.eta = eta;
        hp.margin = margin;
        hp.lambda = lambda;
        out.push_back(hp);
      }
    }
  }
  return out;
}

struct GridSearchConfig {
  int elasticity = 1;              // matrix columns m
  std::uint64_t master_seed = 0;
  int threads = 0;                 // 0 = hardware concurrency
  Hyperparams base;                // epochs/schedule shared by all points
};

struct GridSearchResult {
  Hyperparams selected;
  double cv_error = 0.0;
  std::vector<double> point_errors;  // aligned with grid_points order
};

// Selects hyperparameters by mean cross-validated validation error.
// Diverging grid points score +inf instead of aborting the search; ties go
// to the smaller eta, then the smaller margin/lambda.
inline GridSearchResult grid_search(const Dataset& train, LossKind kind, const GridSpec& grid,
                                    const GridSearchConfig& cfg) {
  const std::vector<Hyperparams> points = grid_points(grid, cfg.base);
  const std::vector<Fold> folds = make_folds(train, derive_seed(cfg.master_seed, "cv/folds"));
  const int n = train.max_length;

  const std::size_t units = points.size() * folds.size();
  std::vector<double> unit_error(units, 0.0);
  parallel_for_units(units, cfg.threads, [&](std::size_t u) {
    const std::size_t p = u / folds.size();
    const std::size_t f = u % folds.size();
    const std::string tag = "cv/p" + std::to_string(p) + "/f" + std::to_string(f);
    Hyperparams hp = points[p];
    hp.shuffle_seed = derive_seed(cfg.master_seed, tag + "/shuffle");

    std::vector<LabeledSeries> fit;
    fit.reserve(folds[f].train_idx.size());
    for (const std::size_t i : folds[f].train_idx) fit.push_back(train.examples[i]);
    try {
      ElasticParams theta0 =
          init_params(n, cfg.elasticity, derive_seed(cfg.master_seed, tag + "/init"));
      const auto [theta, report] = warplearn::train(std::move(theta0), fit, kind, hp);
      std::size_t wrong = 0;
      for (const std::size_t i : folds[f].val_idx)
        if (predict(theta, train.examples[i].values) != train.examples[i].label) ++wrong;
      unit_error[u] = static_cast<double>(wrong) / static_cast<double>(folds[f].val_idx.size());
    } catch (const NumericError&) {
      unit_error[u] = std::numeric_limits<double>::infinity();
    }
  });

  GridSearchResult result;
  result.point_errors.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    double sum = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) sum += unit_error[p * folds.size() + f];
    result.point_errors[p] = sum / static_cast<double>(folds.size());
  }
  std::size_t best = 0;
  for (std::size_t p = 1; p < points.size(); ++p)
    if (result.point_errors[p] < result.point_errors[best]) best = p;
  result.selected = points[best];
  result.cv_error = result.point_errors[best];
  if (std::isinf(result.cv_error))
    throw NumericError("grid_search: every grid point diverged");
  return result;
}

}  // namespace warplearn
