#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "warplearn/elastic.hpp"
#include "warplearn/errors.hpp"
#include "warplearn/rng.hpp"
#include "warplearn/types.hpp"

namespace warplearn {

enum class LossKind { perceptron, margin_perceptron, logistic, linear_svm };

inline const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::perceptron: return "perceptron";
    case LossKind::margin_perceptron: return "margin-perceptron";
    case LossKind::logistic: return "logistic";
    case LossKind::linear_svm: return "linear-svm";
  }
  return "unknown";
}

inline LossKind loss_kind_from_string(const std::string& s) {
  if (s == "perceptron" || s == "eperc") return LossKind::perceptron;
  if (s == "margin-perceptron" || s == "margin" || s == "emarg") return LossKind::margin_perceptron;
  if (s == "logistic" || s == "elogr") return LossKind::logistic;
  if (s == "linear-svm" || s == "svm" || s == "elsvm") return LossKind::linear_svm;
  throw std::invalid_argument("unknown loss kind: " + s);
}

enum class Schedule { constant, inverse_t };

struct Hyperparams {
  double eta = 0.1;              // base learning rate
  double margin = 0.0;           // margin perceptron only
  double lambda = 0.0;           // linear SVM only
  int max_epochs = 50;
  Schedule schedule = Schedule::constant;
  // With inverse_t, eta_t = eta / (1 + t/T); T defaults to the dataset size.
  int schedule_horizon = 0;
  std::uint64_t shuffle_seed = 0;
  // Training aborts with NumericError once ||W|| exceeds this radius.
  double divergence_radius = 1e6;
};

struct TrainReport {
  int epochs_run = 0;
  long long updates_applied = 0;
  double final_train_error = 0.0;
  std::vector<double> loss_trace;  // mean loss over the data after each epoch
};

struct Subgradient {
  Matrix dW;
  double db = 0.0;
};

namespace detail {

inline void check_label(int y) {
  if (y != 1 && y != -1)
    throw std::invalid_argument("label must be +1 or -1, got " + std::to_string(y));
}

inline double sigmoid(double f) { return 1.0 / (1.0 + std::exp(-f)); }

// log(1 + exp(t)) without overflow.
inline double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

}  // namespace detail

// Classification rule: +1 iff b + sigma_W(x) >= 0.
inline int predict(const ElasticParams& theta, const TimeSeries& x) {
  return elastic_linear(x, theta) >= 0.0 ? 1 : -1;
}

inline double predict_proba(const ElasticParams& theta, const TimeSeries& x) {
  return detail::sigmoid(elastic_linear(x, theta));
}

// Loss at decision value f for label y. The SVM regularizer needs ||W||^2,
// passed by the caller; it is ignored by the other losses.
inline double loss_value(LossKind kind, int y, double f, const Hyperparams& hp,
                         double w_norm_sq = 0.0) {
  detail::check_label(y);
  const double yf = y * f;
  switch (kind) {
    case LossKind::perceptron:
      return std::max(0.0, -yf);
    case LossKind::margin_perceptron:
      return std::max(0.0, hp.margin - yf);
    case LossKind::logistic:
      // Table-style cross entropy over labels {0,1}; with y in {+1,-1} it
      // collapses to softplus(-y*f).
      return detail::softplus(-yf);
    case LossKind::linear_svm:
      return hp.lambda * w_norm_sq + std::max(0.0, 1.0 - yf);
  }
  throw std::invalid_argument("unknown loss kind");
}

// Generalized gradient of the loss at theta, taken along the active warping
// path of the elastic inner product. X = x (x) 0 restricted to that path.
inline Subgradient subgradient(LossKind kind, const TimeSeries& x, int y,
                               const ElasticParams& theta, const Hyperparams& hp) {
  detail::check_label(y);
  const ScoredPath sp = elastic_inner_product_with_path(x, theta.W);
  const double f = theta.b + sp.value;

  Subgradient g;
  g.dW = Matrix::Zero(theta.W.rows(), theta.W.cols());
  g.db = 0.0;

  double coeff = 0.0;  // dW = coeff * X, db = coeff
  switch (kind) {
    case LossKind::perceptron:
      if (-static_cast<double>(y) * f > 0.0) coeff = -static_cast<double>(y);
      break;
    case LossKind::margin_perceptron:
      if (hp.margin - static_cast<double>(y) * f > 0.0) coeff = -static_cast<double>(y);
      break;
    case LossKind::logistic: {
      const double y01 = (y + 1) / 2;  // {+1,-1} -> {1,0}
      coeff = -(y01 - detail::sigmoid(f));
      break;
    }
    case LossKind::linear_svm:
      if (1.0 - static_cast<double>(y) * f > 0.0) coeff = -static_cast<double>(y);
      break;
  }
  if (coeff != 0.0) {
    for (const PathPoint& p : sp.path.points)
      g.dW(p.i - 1, p.j - 1) = coeff * x[static_cast<std::size_t>(p.i - 1)];
    g.db = coeff;
  }
  if (kind == LossKind::linear_svm && hp.lambda != 0.0) g.dW += 2.0 * hp.lambda * theta.W;
  return g;
}

// One incremental step: theta' = theta - eta_t * subgradient.
inline ElasticParams sgd_step(const ElasticParams& theta, const TimeSeries& x, int y,
                              double eta_t, LossKind kind, const Hyperparams& hp) {
  if (!(eta_t > 0.0)) throw std::invalid_argument("learning rate must be positive");
  const Subgradient g = subgradient(kind, x, y, theta, hp);
  ElasticParams next;
  next.W = theta.W - eta_t * g.dW;
  next.b = theta.b - eta_t * g.db;
  return next;
}

namespace detail {

// In-place step sharing the arithmetic of sgd_step but skipping the dense
// gradient when the loss is inactive. Returns whether theta changed.
inline bool apply_step(ElasticParams& theta, const LabeledSeries& ex, double eta_t, LossKind kind,
                       const Hyperparams& hp) {
  const ScoredPath sp = elastic_inner_product_with_path(ex.values, theta.W);
  const double f = theta.b + sp.value;
  const double y = static_cast<double>(ex.label);

  double coeff = 0.0;
  switch (kind) {
    case LossKind::perceptron:
      if (-y * f > 0.0) coeff = -y;
      break;
    case LossKind::margin_perceptron:
      if (hp.margin - y * f > 0.0) coeff = -y;
      break;
    case LossKind::logistic: {
      const double y01 = (ex.label + 1) / 2;
      coeff = -(y01 - sigmoid(f));
      break;
    }
    case LossKind::linear_svm:
      if (1.0 - y * f > 0.0) coeff = -y;
      break;
  }

  bool changed = false;
  if (kind == LossKind::linear_svm && hp.lambda != 0.0) {
    theta.W -= eta_t * (2.0 * hp.lambda * theta.W).eval();
    changed = true;
  }
  if (coeff != 0.0) {
    for (const PathPoint& p : sp.path.points) {
      const double entry = coeff * ex.values[static_cast<std::size_t>(p.i - 1)];
      theta.W(p.i - 1, p.j - 1) -= eta_t * entry;
    }
    theta.b -= eta_t * coeff;
    changed = true;
  }
  return changed;
}

}  // namespace detail

inline double mean_loss(const ElasticParams& theta, const std::vector<LabeledSeries>& data,
                        LossKind kind, const Hyperparams& hp) {
  if (data.empty()) throw std::invalid_argument("mean_loss: empty dataset");
  const double w_norm_sq = theta.W.squaredNorm();
  double total = 0.0;
  for (const LabeledSeries& ex : data)
    total += loss_value(kind, ex.label, elastic_linear(ex.values, theta), hp, w_norm_sq);
  return total / static_cast<double>(data.size());
}

inline double error_rate(const ElasticParams& theta, const std::vector<LabeledSeries>& data) {
  if (data.empty()) throw std::invalid_argument("error_rate: empty dataset");
  std::size_t wrong = 0;
  for (const LabeledSeries& ex : data)
    if (predict(theta, ex.values) != ex.label) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

inline double learning_rate_at(const Hyperparams& hp, long long t, std::size_t dataset_size) {
  if (hp.schedule == Schedule::constant) return hp.eta;
  const double horizon =
      hp.schedule_horizon > 0 ? hp.schedule_horizon : static_cast<double>(dataset_size);
  return hp.eta / (1.0 + static_cast<double>(t) / horizon);
}

// Stochastic generalized gradient training. Passes over the data in a
// seeded per-epoch shuffle; perceptron-family losses stop early after an
// epoch with zero updates.
inline std::pair<ElasticParams, TrainReport> train(ElasticParams theta,
                                                   const std::vector<LabeledSeries>& data,
                                                   LossKind kind, const Hyperparams& hp) {
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  for (const LabeledSeries& ex : data) {
    detail::check_label(ex.label);
    detail::check_embeddable(ex.values, theta.W, "train");
  }
  const bool stops_on_clean_epoch =
      kind == LossKind::perceptron || kind == LossKind::margin_perceptron;

  std::mt19937_64 rng(hp.shuffle_seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainReport report;
  long long t = 0;
  for (int epoch = 0; epoch < hp.max_epochs; ++epoch) {
    deterministic_shuffle(order, rng);
    long long epoch_updates = 0;
    for (const std::size_t idx : order) {
      const double eta_t = learning_rate_at(hp, t, data.size());
      if (detail::apply_step(theta, data[idx], eta_t, kind, hp)) {
        ++epoch_updates;
        if (theta.W.norm() > hp.divergence_radius)
          throw NumericError("divergence guard tripped: ||W|| = " + std::to_string(theta.W.norm()) +
                             " > " + std::to_string(hp.divergence_radius));
      }
      ++t;
    }
    report.updates_applied += epoch_updates;
    report.loss_trace.push_back(mean_loss(theta, data, kind, hp));
    ++report.epochs_run;
    if (stops_on_clean_epoch && epoch_updates == 0) break;
  }
  report.final_train_error = error_rate(theta, data);
  return {std::move(theta), report};
}

// Random initialization: entries i.i.d. uniform on [-0.01, +0.01].
inline ElasticParams init_params(int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("init_params: dimensions must be positive");
  std::mt19937_64 rng(seed);
  ElasticParams theta;
  theta.W = Matrix(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) theta.W(i, j) = uniform_in(rng, -0.01, 0.01);
  theta.b = uniform_in(rng, -0.01, 0.01);
  return theta;
}

// Compares the implemented subgradient against central finite differences
// of the loss. Every probe re-derives the active path; if a perturbation
// flips it, the point is non-smooth and NumericError is raised.
inline double finite_diff_check(LossKind kind, const TimeSeries& x, int y,
                                const ElasticParams& theta, const Hyperparams& hp, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite_diff_check: eps must be positive");
  const WarpingPath base_path = elastic_inner_product_with_path(x, theta.W).path;

  const auto loss_at = [&](const ElasticParams& p) {
    const ScoredPath sp = elastic_inner_product_with_path(x, p.W);
    if (!(sp.path == base_path)) throw NumericError("non-unique active path");
    return loss_value(kind, y, p.b + sp.value, hp, p.W.squaredNorm());
  };

  const Subgradient g = subgradient(kind, x, y, theta, hp);
  double max_dev = 0.0;
  ElasticParams probe = theta;
  for (int i = 0; i < theta.rows(); ++i) {
    for (int j = 0; j < theta.cols(); ++j) {
      const double w0 = theta.W(i, j);
      probe.W(i, j) = w0 + eps;
      const double up = loss_at(probe);
      probe.W(i, j) = w0 - eps;
      const double down = loss_at(probe);
      probe.W(i, j) = w0;
      const double fd = (up - down) / (2.0 * eps);
      max_dev = std::max(max_dev, std::abs(fd - g.dW(i, j)) / std::max(1.0, std::abs(fd)));
    }
  }
  probe.b = theta.b + eps;
  const double up = loss_at(probe);
  probe.b = theta.b - eps;
  const double down = loss_at(probe);
  const double fd_b = (up - down) / (2.0 * eps);
  max_dev = std::max(max_dev, std::abs(fd_b - g.db) / std::max(1.0, std::abs(fd_b)));
  return max_dev;
}

}  // namespace warplearn
