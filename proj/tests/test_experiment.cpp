#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <warplearn/experiment.hpp>
#include <warplearn/report.hpp>
#include <warplearn/rng.hpp>

#include "oracles.hpp"

using namespace warplearn;

namespace {

struct PlantedFiles {
  std::string train_path;
  std::string test_path;
};

// Writes train/test files labeled by a planted parameter set with a safety
// margin, so the problem is elastic-linearly separable. Classes are kept
// balanced.
PlantedFiles write_planted(std::mt19937_64& rng, const std::string& stem, int train_count,
                           int test_count, int len, int m, double margin) {
  const ElasticParams star{oracles::random_matrix(rng, len, m, -1.0, 1.0),
                           uniform_in(rng, -0.3, 0.3)};
  const auto emit = [&](const std::string& path, int count) {
    std::ofstream out(path);
    out.precision(17);
    int positives = 0, negatives = 0;
    const int per_class = (count + 1) / 2;
    while (positives + negatives < count) {
      const TimeSeries x = oracles::random_series(rng, len);
      const double f = elastic_linear(x, star);
      if (std::abs(f) < margin) continue;
      int& quota = f >= 0.0 ? positives : negatives;
      if (quota >= per_class) continue;
      ++quota;
      out << (f >= 0.0 ? 1 : -1);
      for (const double v : x) out << '\t' << v;
      out << '\n';
    }
  };
  PlantedFiles files;
  files.train_path = (std::filesystem::temp_directory_path() / (stem + "_train.tsv")).string();
  files.test_path = (std::filesystem::temp_directory_path() / (stem + "_test.tsv")).string();
  emit(files.train_path, train_count);
  emit(files.test_path, test_count);
  return files;
}

// Two well-separated bundles of near-duplicates, trivially separable and
// generalizable.
PlantedFiles write_bundles(std::mt19937_64& rng, const std::string& stem, int per_class_train,
                           int per_class_test, int len) {
  const auto emit = [&](const std::string& path, int per_class) {
    std::ofstream out(path);
    out.precision(17);
    for (int c = 0; c < 2; ++c) {
      const double center = c == 0 ? 3.0 : -3.0;
      for (int i = 0; i < per_class; ++i) {
        out << (c == 0 ? 1 : -1);
        for (int s = 0; s < len; ++s) out << '\t' << center + uniform_in(rng, -0.2, 0.2);
        out << '\n';
      }
    }
  };
  PlantedFiles files;
  files.train_path = (std::filesystem::temp_directory_path() / (stem + "_train.tsv")).string();
  files.test_path = (std::filesystem::temp_directory_path() / (stem + "_test.tsv")).string();
  emit(files.train_path, per_class_train);
  emit(files.test_path, per_class_test);
  return files;
}

}  // namespace

TEST_CASE("grid_search returns a singleton grid unchanged") {
  std::mt19937_64 rng(3);
  const auto files = write_planted(rng, "wl_gs_singleton", 12, 4, 5, 2, 0.4);
  const Dataset train = load_dataset(files.train_path);
  GridSpec grid;
  grid.etas = {0.125};
  GridSearchConfig cfg;
  cfg.elasticity = 2;
  cfg.base.max_epochs = 5;
  const GridSearchResult result = grid_search(train, LossKind::perceptron, grid, cfg);
  CHECK(result.selected.eta == 0.125);
  CHECK(result.point_errors.size() == 1);
  std::filesystem::remove(files.train_path);
  std::filesystem::remove(files.test_path);
}

TEST_CASE("grid_search picks the winning learning rate on a planted fixture") {
  std::mt19937_64 rng(5);
  const auto files = write_planted(rng, "wl_gs_planted", 16, 4, 4, 2, 0.5);
  const Dataset train = load_dataset(files.train_path);
  GridSpec grid;
  grid.etas = {std::ldexp(1.0, -3), 1e6};  // the huge rate trips the guard
  GridSearchConfig cfg;
  cfg.elasticity = 2;
  cfg.base.max_epochs = 30;
  cfg.base.divergence_radius = 1e4;
  const GridSearchResult result = grid_search(train, LossKind::logistic, grid, cfg);
  CHECK(result.selected.eta == std::ldexp(1.0, -3));
  REQUIRE(result.point_errors.size() == 2);
  CHECK(std::isinf(result.point_errors[1]));  // diverged, scored +inf, not aborted
  std::filesystem::remove(files.train_path);
  std::filesystem::remove(files.test_path);
}

TEST_CASE("grid_search breaks ties toward the smaller eta") {
  std::mt19937_64 rng(7);
  const auto files = write_bundles(rng, "wl_gs_ties", 6, 2, 4);
  const Dataset train = load_dataset(files.train_path);
  // Both rates solve the problem, so CV errors tie at zero.
  GridSpec grid;
  grid.etas = {0.25, 0.0625};
  GridSearchConfig cfg;
  cfg.elasticity = 2;
  cfg.base.max_epochs = 100;
  const GridSearchResult result = grid_search(train, LossKind::perceptron, grid, cfg);
  CHECK(result.cv_error == 0.0);
  CHECK(result.selected.eta == 0.0625);
  std::filesystem::remove(files.train_path);
  std::filesystem::remove(files.test_path);
}

TEST_CASE("run_experiment solves a planted problem and reports zero error") {
  std::mt19937_64 rng(11);
  const auto files = write_planted(rng, "wl_exp_planted", 60, 10, 5, 2, 1.0);
  ExperimentConfig cfg;
  cfg.train_path = files.train_path;
  cfg.test_path = files.test_path;
  cfg.kind = LossKind::perceptron;
  cfg.elasticity = 2;
  cfg.trials = 1;
  cfg.fixed_params = true;
  cfg.base.eta = 0.1;
  cfg.base.max_epochs = 200;
  cfg.master_seed = 17;
  const ErrorReport report = run_experiment(cfg);
  CHECK(report.mean_error == 0.0);
  CHECK(report.outcomes.size() == 1);
  CHECK(report.elasticity == 2);
  std::filesystem::remove(files.train_path);
  std::filesystem::remove(files.test_path);
}

TEST_CASE("identical master seeds give byte-identical payloads") {
  std::mt19937_64 rng(13);
  const auto files = write_planted(rng, "wl_exp_determinism", 14, 8, 4, 2, 0.3);
  ExperimentConfig cfg;
  cfg.train_path = files.train_path;
  cfg.test_path = files.test_path;
  cfg.kind = LossKind::logistic;
  cfg.elasticity = 2;
  cfg.trials = 3;
  cfg.grid.etas = {0.5, 0.25};
  cfg.base.max_epochs = 8;
  cfg.master_seed = 4242;
  cfg.threads = 2;
  const ErrorReport a = run_experiment(cfg);
  cfg.threads = 1;  // parallelism must not leak into results
  const ErrorReport b = run_experiment(cfg);
  CHECK(report_payload(a).dump(2) == report_payload(b).dump(2));
  cfg.master_seed = 4243;
  const ErrorReport c = run_experiment(cfg);
  CHECK(report_payload(a).dump(2) != report_payload(c).dump(2));
  std::filesystem::remove(files.train_path);
  std::filesystem::remove(files.test_path);
}

TEST_CASE("elasticity resolution rules") {
  std::mt19937_64 rng(17);
  const auto files = write_planted(rng, "wl_exp_elastic", 10, 4, 23, 2, 0.2);
  ExperimentConfig cfg;
  cfg.train_path = files.train_path;
  cfg.test_path = files.test_path;
  cfg.kind = LossKind::perceptron;
  cfg.trials = 1;
  cfg.fixed_params = true;
  cfg.base.eta = 0.1;
  cfg.base.max_epochs = 3;
  SECTION("default is ceil(n/10)") {
    const ErrorReport report = run_experiment(cfg);
    CHECK(report.elasticity == 3);  // ceil(23/10)
    CHECK(report.elasticity_rule == "ceil(n/10)");
  }
  SECTION("ratio rule") {
    cfg.elasticity_ratio = 0.5;
    const ErrorReport report = run_experiment(cfg);
    CHECK(report.elasticity == 12);  // ceil(0.5*23)
    CHECK(report.elasticity_rule == "ratio");
  }
  SECTION("ratio zero collapses to one column") {
    cfg.elasticity_ratio = 0.0;
    const ErrorReport report = run_experiment(cfg);
    CHECK(report.elasticity == 1);
  }
  SECTION("explicit elasticity wins") {
    cfg.elasticity = 7;
    cfg.elasticity_ratio = 0.5;
    const ErrorReport report = run_experiment(cfg);
    CHECK(report.elasticity == 7);
    CHECK(report.elasticity_rule == "explicit");
  }
  std::filesystem::remove(files.train_path);
  std::filesystem::remove(files.test_path);
}

TEST_CASE("elasticity sweep emits ascending rows with the documented shape") {
  std::mt19937_64 rng(19);
  const auto files = write_planted(rng, "wl_sweep", 10, 6, 6, 2, 0.3);
  ExperimentConfig cfg;
  cfg.train_path = files.train_path;
  cfg.test_path = files.test_path;
  cfg.kind = LossKind::perceptron;
  cfg.trials = 2;
  cfg.base.max_epochs = 4;
  cfg.master_seed = 7;
  const SweepReport report = elasticity_sweep(cfg);
  REQUIRE(report.rows.size() == 11);
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i)
    REQUIRE(report.rows[i].w < report.rows[i + 1].w);
  CHECK(report.rows.front().w == 0.0);
  CHECK(report.rows.front().elasticity == 1);  // w = 0 maps to m = 1
  for (const auto& row : report.rows) {
    CHECK(row.elasticity >= 1);
    CHECK(row.mean_error >= 0.0);
    CHECK(row.mean_error <= 1.0);
  }
  // Deterministic rerun.
  const SweepReport again = elasticity_sweep(cfg);
  CHECK(sweep_payload(report).dump() == sweep_payload(again).dump());
  std::filesystem::remove(files.train_path);
  std::filesystem::remove(files.test_path);
}

TEST_CASE("nn experiment classifies a memorized test item correctly") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto train_path = (dir / "wl_nn_train.tsv").string();
  const auto test_path = (dir / "wl_nn_test.tsv").string();
  {
    std::ofstream train(train_path);
    train << "1\t0\t0\t0\n1\t0.1\t0\t0.1\n-1\t5\t5\t5\n-1\t5.1\t5\t4.9\n";
    std::ofstream test(test_path);
    test << "1\t0\t0\t0\n-1\t5\t5\t5\n";
  }
  ExperimentConfig cfg;
  cfg.train_path = train_path;
  cfg.test_path = test_path;
  for (const NnMode mode : {NnMode::all, NnMode::kme, NnMode::ahc}) {
    const ErrorReport report = nn_experiment(cfg, mode);
    INFO(to_string(mode));
    CHECK(report.mean_error == 0.0);
    CHECK(report.outcomes.size() == 1);
  }
  std::filesystem::remove(train_path);
  std::filesystem::remove(test_path);
}

TEST_CASE("report serialization shapes") {
  std::mt19937_64 rng(23);
  const auto files = write_planted(rng, "wl_report", 10, 5, 4, 2, 0.3);
  ExperimentConfig cfg;
  cfg.train_path = files.train_path;
  cfg.test_path = files.test_path;
  cfg.kind = LossKind::linear_svm;
  cfg.trials = 2;
  cfg.fixed_params = true;
  cfg.base.eta = 0.05;
  cfg.base.lambda = 0.01;
  cfg.base.max_epochs = 5;
  const ErrorReport report = run_experiment(cfg);

  SECTION("json payload carries the documented fields") {
    const nlohmann::json j = report_full(report);
    CHECK(j.at("format_version") == kReportFormat);
    CHECK(j.at("classifier") == "linear-svm");
    CHECK(j.at("dataset").at("train_size") == 10);
    CHECK(j.at("trials").size() == 2);
    CHECK(j.contains("mean_error"));
    CHECK(j.contains("std_error"));
    CHECK(j.at("params").contains("eta"));
    CHECK(j.contains("seed"));
    CHECK(j.contains("timing"));
    CHECK_FALSE(report_payload(report).contains("timing"));
  }
  SECTION("csv has a row per trial plus summary rows") {
    const std::string csv = report_csv(report);
    CHECK(csv.find("row,trial,test_error,updates,epochs\n") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 + 2);
    CHECK(csv.find("summary,") != std::string::npos);
  }
  SECTION("emit_report writes files and rejects unknown formats") {
    const auto out = (std::filesystem::temp_directory_path() / "wl_report_out.json").string();
    emit_report(report, "json", out);
    CHECK(std::filesystem::exists(out));
    CHECK_THROWS_AS(emit_report(report, "xml", out), std::invalid_argument);
    std::filesystem::remove(out);
    CHECK_THROWS_AS(emit_report(report, "json", "/nonexistent-dir/x.json"), DataError);
  }
  std::filesystem::remove(files.train_path);
  std::filesystem::remove(files.test_path);
}

TEST_CASE("sweep csv columns") {
  SweepReport report;
  report.rows.push_back({0.0, 1, 0.1, 0.25, 0.01});
  report.rows.push_back({0.05, 2, 0.3, 0.125, 0.02});
  const std::string csv = sweep_csv(report);
  CHECK(csv.find("w,m,eta,mean_error,std_error\n") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
