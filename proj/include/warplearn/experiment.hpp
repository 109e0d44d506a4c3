#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "warplearn/classifier.hpp"
#include "warplearn/cluster.hpp"
#include "warplearn/cv.hpp"
#include "warplearn/dataset.hpp"
#include "warplearn/errors.hpp"
#include "warplearn/nn.hpp"
#include "warplearn/parallel.hpp"
#include "warplearn/rng.hpp"

namespace warplearn {

struct ExperimentConfig {
  std::string train_path;
  std::string test_path;
  LossKind kind = LossKind::perceptron;
  // Elasticity resolution: explicit m wins, then ratio w (m = max(1,
  // ceil(w*n))), else the default m = ceil(n/10). n is the longest training
  // series.
  int elasticity = 0;
  double elasticity_ratio = -1.0;
  GridSpec grid;            // empty etas -> default grid for the loss kind
  bool fixed_params = false;  // skip model selection, use `base` as-is
  Hyperparams base;           // epochs/schedule shared by every run
  int trials = 10;
  std::uint64_t master_seed = 0;
  int threads = 0;
  bool z_normalize = false;
  std::optional<int> band;  // NN+ALL only
};

struct TrialOutcome {
  int trial = 0;
  double test_error = 0.0;
  long long updates = 0;
  int epochs = 0;
};

struct ErrorReport {
  std::string task;  // "experiment" or "nn"
  std::string classifier;
  std::string dataset_name;
  std::string train_path;
  std::string test_path;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  int max_length = 0;
  double raw_negative = 0.0;
  double raw_positive = 0.0;
  int elasticity = 0;
  std::string elasticity_rule;
  bool z_normalized = false;
  std::uint64_t master_seed = 0;
  Hyperparams selected;
  bool selected_by_grid = false;
  double cv_error = 0.0;
  std::vector<TrialOutcome> outcomes;
  double mean_error = 0.0;
  double std_error = 0.0;
  double total_seconds = 0.0;  // timing lives outside the deterministic payload
};

struct SweepRow {
  double w = 0.0;
  int elasticity = 1;
  double eta = 0.0;
  double mean_error = 0.0;
  double std_error = 0.0;
};

struct SweepReport {
  std::string classifier;
  std::string dataset_name;
  std::string train_path;
  std::string test_path;
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<SweepRow> rows;  // ascending in w
  double total_seconds = 0.0;
};

namespace detail {

inline int resolve_elasticity(const ExperimentConfig& cfg, int n) {
  if (cfg.elasticity > 0) return cfg.elasticity;
  if (cfg.elasticity_ratio >= 0.0)
    return std::max(1, static_cast<int>(std::ceil(cfg.elasticity_ratio * n)));
  return std::max(1, static_cast<int>(std::ceil(static_cast<double>(n) / 10.0)));
}

inline const char* elasticity_rule_name(const ExperimentConfig& cfg) {
  if (cfg.elasticity > 0) return "explicit";
  if (cfg.elasticity_ratio >= 0.0) return "ratio";
  return "ceil(n/10)";
}

inline void summarize(ErrorReport& report) {
  double mean = 0.0;
  for (const TrialOutcome& t : report.outcomes) mean += t.test_error;
  mean /= static_cast<double>(report.outcomes.size());
  double var = 0.0;
  for (const TrialOutcome& t : report.outcomes) var += (t.test_error - mean) * (t.test_error - mean);
  report.mean_error = mean;
  report.std_error =
      report.outcomes.size() > 1
          ? std::sqrt(var / static_cast<double>(report.outcomes.size() - 1))
          : 0.0;
}

inline double test_error_of(const ElasticParams& theta, const Dataset& test) {
  std::size_t wrong = 0;
  for (const LabeledSeries& ex : test.examples)
    if (predict(theta, ex.values) != ex.label) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(test.size());
}

inline void fill_dataset_echo(ErrorReport& report, const Dataset& train, const Dataset& test,
                              const ExperimentConfig& cfg) {
  report.dataset_name = train.name;
  report.train_path = cfg.train_path;
  report.test_path = cfg.test_path;
  report.train_size = train.size();
  report.test_size = test.size();
  report.max_length = train.max_length;
  report.raw_negative = train.raw_negative;
  report.raw_positive = train.raw_positive;
  report.z_normalized = cfg.z_normalize;
  report.master_seed = cfg.master_seed;
}

}  // namespace detail

// Full protocol: select hyperparameters once on the training set, then run
// independent train+test trials that differ only in their RNG streams.
inline ErrorReport run_experiment(const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  LoadOptions opts;
  opts.z_normalize = cfg.z_normalize;
  const Dataset train = load_dataset(cfg.train_path, opts);
  const Dataset test = load_dataset(cfg.test_path, opts);
  if (cfg.trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");

  const int n = train.max_length;
  const int m = detail::resolve_elasticity(cfg, n);

  ErrorReport report;
  report.task = "experiment";
  report.classifier = to_string(cfg.kind);
  detail::fill_dataset_echo(report, train, test, cfg);
  report.elasticity = m;
  report.elasticity_rule = detail::elasticity_rule_name(cfg);

  Hyperparams selected = cfg.base;
  if (cfg.fixed_params) {
    report.selected_by_grid = false;
  } else {
    GridSearchConfig gs;
    gs.elasticity = m;
    gs.master_seed = cfg.master_seed;
    gs.threads = cfg.threads;
    gs.base = cfg.base;
    const GridSpec grid = cfg.grid.etas.empty() ? default_grid(cfg.kind) : cfg.grid;
    const GridSearchResult result = grid_search(train, cfg.kind, grid, gs);
    selected = result.selected;
    report.selected_by_grid = true;
    report.cv_error = result.cv_error;
  }
  report.selected = selected;

  report.outcomes.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for_units(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
    const std::string tag = "trial/" + std::to_string(t);
    Hyperparams hp = selected;
    hp.shuffle_seed = derive_seed(cfg.master_seed, tag + "/shuffle");
    try {
      ElasticParams theta0 = init_params(n, m, derive_seed(cfg.master_seed, tag + "/init"));
      auto [theta, train_report] = warplearn::train(std::move(theta0), train.examples, cfg.kind, hp);
      report.outcomes[t] = {static_cast<int>(t), detail::test_error_of(theta, test),
                            train_report.updates_applied, train_report.epochs_run};
    } catch (const NumericError& e) {
      throw NumericError(train.name + " trial " + std::to_string(t) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(train.name + " trial " + std::to_string(t) + ": " + e.what());
    }
  });
  detail::summarize(report);
  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

// Elasticity sweep: for each ratio w, pick the learning rate with the lowest
// training-set error, then evaluate test error over independent trials.
inline SweepReport elasticity_sweep(const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  LoadOptions opts;
  opts.z_normalize = cfg.z_normalize;
  const Dataset train = load_dataset(cfg.train_path, opts);
  const Dataset test = load_dataset(cfg.test_path, opts);
  if (cfg.trials < 1) throw std::invalid_argument("elasticity_sweep: trials must be >= 1");

  const int n = train.max_length;
  const std::vector<double> ratios = sweep_ratio_grid();
  std::vector<double> etas = sweep_eta_grid();
  std::sort(etas.begin(), etas.end());  // ties resolve toward the smaller eta

  SweepReport report;
  report.classifier = to_string(cfg.kind);
  report.dataset_name = train.name;
  report.train_path = cfg.train_path;
  report.test_path = cfg.test_path;
  report.trials = cfg.trials;
  report.master_seed = cfg.master_seed;
  report.rows.resize(ratios.size());

  // Phase 1: training-set error for every (w, eta).
  std::vector<double> train_error(ratios.size() * etas.size(), 0.0);
  parallel_for_units(train_error.size(), cfg.threads, [&](std::size_t u) {
    const std::size_t wi = u / etas.size();
    const std::size_t ei = u % etas.size();
    const int m = std::max(1, static_cast<int>(std::ceil(ratios[wi] * n)));
    const std::string tag = "sweep/w" + std::to_string(wi) + "/e" + std::to_string(ei);
    Hyperparams hp = cfg.base;
    hp.eta = etas[ei];
    hp.shuffle_seed = derive_seed(cfg.master_seed, tag + "/shuffle");
    ElasticParams theta0 = init_params(n, m, derive_seed(cfg.master_seed, tag + "/init"));
    try {
      const auto [theta, tr] = warplearn::train(std::move(theta0), train.examples, cfg.kind, hp);
      train_error[u] = tr.final_train_error;
    } catch (const NumericError&) {
      train_error[u] = std::numeric_limits<double>::infinity();
    }
  });

  std::vector<std::size_t> picked(ratios.size(), 0);
  for (std::size_t wi = 0; wi < ratios.size(); ++wi) {
    std::size_t best = 0;
    for (std::size_t ei = 1; ei < etas.size(); ++ei)
      if (train_error[wi * etas.size() + ei] < train_error[wi * etas.size() + best]) best = ei;
    picked[wi] = best;
  }

  // Phase 2: test-error trials at the picked learning rate.
  std::vector<double> trial_error(ratios.size() * static_cast<std::size_t>(cfg.trials), 0.0);
  parallel_for_units(trial_error.size(), cfg.threads, [&](std::size_t u) {
    const std::size_t wi = u / static_cast<std::size_t>(cfg.trials);
    const std::size_t t = u % static_cast<std::size_t>(cfg.trials);
    const int m = std::max(1, static_cast<int>(std::ceil(ratios[wi] * n)));
    const std::string tag = "sweep/w" + std::to_string(wi) + "/trial/" + std::to_string(t);
    Hyperparams hp = cfg.base;
    hp.eta = etas[picked[wi]];
    hp.shuffle_seed = derive_seed(cfg.master_seed, tag + "/shuffle");
    ElasticParams theta0 = init_params(n, m, derive_seed(cfg.master_seed, tag + "/init"));
    auto [theta, tr] = warplearn::train(std::move(theta0), train.examples, cfg.kind, hp);
    trial_error[u] = detail::test_error_of(theta, test);
  });

  for (std::size_t wi = 0; wi < ratios.size(); ++wi) {
    SweepRow& row = report.rows[wi];
    row.w = ratios[wi];
    row.elasticity = std::max(1, static_cast<int>(std::ceil(ratios[wi] * n)));
    row.eta = etas[picked[wi]];
    double mean = 0.0;
    for (int t = 0; t < cfg.trials; ++t)
      mean += trial_error[wi * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)];
    mean /= static_cast<double>(cfg.trials);
    double var = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
      const double e =
          trial_error[wi * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(t)];
      var += (e - mean) * (e - mean);
    }
    row.mean_error = mean;
    row.std_error = cfg.trials > 1 ? std::sqrt(var / static_cast<double>(cfg.trials - 1)) : 0.0;
  }
  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

enum class NnMode { all, kme, ahc };

inline const char* to_string(NnMode mode) {
  switch (mode) {
    case NnMode::all: return "nn-all";
    case NnMode::kme: return "nn-kme";
    case NnMode::ahc: return "nn-ahc";
  }
  return "unknown";
}

inline NnMode nn_mode_from_string(const std::string& s) {
  if (s == "all") return NnMode::all;
  if (s == "kme") return NnMode::kme;
  if (s == "ahc") return NnMode::ahc;
  throw std::invalid_argument("unknown NN mode: " + s);
}

// Nearest-neighbor baselines. ALL uses every training series as a
// prototype; KME/AHC learn one prototype matrix per class. Deterministic,
// so a single trial is reported.
inline ErrorReport nn_experiment(const ExperimentConfig& cfg, NnMode mode) {
  const auto started = std::chrono::steady_clock::now();
  LoadOptions opts;
  opts.z_normalize = cfg.z_normalize;
  const Dataset train = load_dataset(cfg.train_path, opts);
  const Dataset test = load_dataset(cfg.test_path, opts);

  ErrorReport report;
  report.task = "nn";
  report.classifier = to_string(mode);
  detail::fill_dataset_echo(report, train, test, cfg);

  std::size_t wrong = 0;
  if (mode == NnMode::all) {
    report.elasticity = 0;
    report.elasticity_rule = "none";
    std::vector<int> labels(test.size());
    parallel_for_units(test.size(), cfg.threads, [&](std::size_t i) {
      labels[i] = nn_all_label(test.examples[i].values, train.examples, cfg.band);
    });
    for (std::size_t i = 0; i < test.size(); ++i)
      if (labels[i] != test.examples[i].label) ++wrong;
  } else {
    // Prototype matrices default to m = n columns.
    MeanConfig mc;
    mc.elasticity = cfg.elasticity > 0 ? cfg.elasticity : train.max_length;
    report.elasticity = mc.elasticity;
    report.elasticity_rule = cfg.elasticity > 0 ? "explicit" : "n";
    const PrototypeSet protos = mode == NnMode::kme ? kme_prototypes(train.examples, mc)
                                                    : ahc_prototypes(train.examples, mc);
    std::vector<int> labels(test.size());
    parallel_for_units(test.size(), cfg.threads, [&](std::size_t i) {
      labels[i] = nn_prototype_label(test.examples[i].values, protos);
    });
    for (std::size_t i = 0; i < test.size(); ++i)
      if (labels[i] != test.examples[i].label) ++wrong;
  }
  const double error = static_cast<double>(wrong) / static_cast<double>(test.size());
  report.outcomes.push_back({0, error, 0, 0});
  detail::summarize(report);
  report.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace warplearn
