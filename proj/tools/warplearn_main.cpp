// Command-line front end: DTW distances, elastic classifier training and
// evaluation, DTW-space means, elasticity sweeps, nearest-neighbor baselines
// and the full benchmark protocol.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <warplearn/warplearn.hpp>

namespace {

using namespace warplearn;

// A single series: numeric tokens separated by commas, tabs, spaces or
// newlines.
TimeSeries load_series_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open series file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  for (char& c : text)
    if (c == ',' || c == '\t' || c == '\r' || c == '\n') c = ' ';
  std::istringstream stream(text);
  TimeSeries out;
  std::string token;
  while (stream >> token) {
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(v);
    } catch (const std::exception&) {
      throw DataError(path + ": unparseable sample '" + token + "'");
    }
  }
  if (out.empty()) throw DataError(path + ": no samples found");
  return out;
}

struct CommonFlags {
  std::uint64_t seed = 0;
  int trials = 10;
  std::string format = "json";
  std::string out;
  int threads = 0;
  bool z_normalize = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_trials = true) {
  cmd->add_option("--seed", flags.seed, "Master RNG seed");
  if (with_trials) cmd->add_option("--trials", flags.trials, "Independent train/test repetitions");
  cmd->add_option("--format", flags.format, "Report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", flags.out, "Output path ('-' or empty = stdout)");
  cmd->add_option("--threads", flags.threads, "Worker threads (0 = hardware)");
  cmd->add_flag("--z-normalize", flags.z_normalize, "Standardize each series before use");
}

int run(int argc, char** argv) {
  CLI::App app{"Gradient learning on time series under dynamic time warping"};
  app.set_version_flag("--version", std::string("warplearn ") + kLibraryVersion);
  app.require_subcommand(1);

  // dtw -------------------------------------------------------------------
  auto* dtw_cmd = app.add_subcommand("dtw", "DTW distance between two series files");
  std::string file_a, file_b;
  std::int64_t band_flag = -1;
  bool want_path = false;
  dtw_cmd->add_option("fileA", file_a, "First series file")->required();
  dtw_cmd->add_option("fileB", file_b, "Second series file")->required();
  dtw_cmd->add_option("--band", band_flag, "Sakoe-Chiba band radius");
  dtw_cmd->add_flag("--path", want_path, "Print the optimal warping path");

  // train -----------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Train one elastic linear classifier");
  std::string train_path, model_out = "model.json", kind_name = "perceptron";
  int elasticity = 0, epochs = 50;
  double ratio = -1.0, eta = 0.1, margin = 0.0, lambda = 0.0, radius = 1e6;
  std::string schedule_name = "constant";
  CommonFlags train_flags;
  train_cmd->add_option("--train", train_path, "Training dataset (UCR row format)")->required();
  train_cmd->add_option("--kind", kind_name,
                        "Loss: perceptron, margin, logistic or svm");
  train_cmd->add_option("--eta", eta, "Learning rate");
  train_cmd->add_option("--margin", margin, "Margin (margin perceptron)");
  train_cmd->add_option("--lambda", lambda, "Regularization (linear SVM)");
  train_cmd->add_option("--epochs", epochs, "Maximum training epochs");
  train_cmd->add_option("--elasticity", elasticity, "Weight matrix columns m");
  train_cmd->add_option("--elasticity-ratio", ratio, "m = ceil(ratio * n)");
  train_cmd->add_option("--schedule", schedule_name, "constant or inverse-t")
      ->check(CLI::IsMember({"constant", "inverse-t"}));
  train_cmd->add_option("--divergence-radius", radius, "Frobenius-norm guard");
  train_cmd->add_option("--model-out", model_out, "Where to store the model");
  add_common(train_cmd, train_flags, false);

  // eval ------------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a stored model on a dataset");
  std::string eval_model, eval_data;
  CommonFlags eval_flags;
  eval_cmd->add_option("--model", eval_model, "Model file")->required();
  eval_cmd->add_option("--data", eval_data, "Dataset to score")->required();
  add_common(eval_cmd, eval_flags, false);

  // mean ------------------------------------------------------------------
  auto* mean_cmd = app.add_subcommand("mean", "DTW-space mean of a dataset");
  std::string mean_data, mean_out;
  int mean_elasticity = 0, mean_iters = 100;
  double mean_tol = 1e-6;
  mean_cmd->add_option("--data", mean_data, "Dataset (labels ignored)")->required();
  mean_cmd->add_option("--elasticity", mean_elasticity, "Mean matrix columns (0 = max length)");
  mean_cmd->add_option("--max-iters", mean_iters, "Iteration cap");
  mean_cmd->add_option("--tol", mean_tol, "Relative variation tolerance");
  mean_cmd->add_option("--out", mean_out, "Prototype container output path");

  // sweep -----------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "Error rate as a function of elasticity");
  std::string sweep_train, sweep_test, sweep_kind = "perceptron";
  int sweep_epochs = 50;
  CommonFlags sweep_flags;
  sweep_cmd->add_option("--train", sweep_train, "Training dataset")->required();
  sweep_cmd->add_option("--test", sweep_test, "Test dataset")->required();
  sweep_cmd->add_option("--kind", sweep_kind, "Loss kind");
  sweep_cmd->add_option("--epochs", sweep_epochs, "Maximum training epochs");
  add_common(sweep_cmd, sweep_flags);

  // nn --------------------------------------------------------------------
  auto* nn_cmd = app.add_subcommand("nn", "Nearest-neighbor baselines");
  std::string nn_train, nn_test, nn_mode = "all";
  std::int64_t nn_band = -1;
  int nn_elasticity = 0;
  CommonFlags nn_flags;
  nn_cmd->add_option("--train", nn_train, "Training dataset")->required();
  nn_cmd->add_option("--test", nn_test, "Test dataset")->required();
  nn_cmd->add_option("--mode", nn_mode, "all, kme or ahc")
      ->check(CLI::IsMember({"all", "kme", "ahc"}));
  nn_cmd->add_option("--band", nn_band, "Sakoe-Chiba band (ALL mode)");
  nn_cmd->add_option("--elasticity", nn_elasticity, "Prototype columns (0 = max length)");
  add_common(nn_cmd, nn_flags, false);

  // bench -----------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "Model selection plus repeated trials");
  std::string bench_train, bench_test, bench_kind = "perceptron";
  int bench_elasticity = 0, bench_epochs = 50;
  double bench_ratio = -1.0, bench_eta = 0.0, bench_margin = 0.0, bench_lambda = 0.0;
  bool bench_fixed = false;
  CommonFlags bench_flags;
  bench_cmd->add_option("--train", bench_train, "Training dataset")->required();
  bench_cmd->add_option("--test", bench_test, "Test dataset")->required();
  bench_cmd->add_option("--kind", bench_kind, "Loss kind");
  bench_cmd->add_option("--elasticity", bench_elasticity, "Weight matrix columns m");
  bench_cmd->add_option("--elasticity-ratio", bench_ratio, "m = ceil(ratio * n)");
  bench_cmd->add_option("--epochs", bench_epochs, "Maximum training epochs");
  auto* eta_opt = bench_cmd->add_option("--eta", bench_eta, "Fixed learning rate (skips grid search)");
  bench_cmd->add_option("--margin", bench_margin, "Fixed margin");
  bench_cmd->add_option("--lambda", bench_lambda, "Fixed regularization");
  add_common(bench_cmd, bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help is success, anything else a usage error
  }

  if (dtw_cmd->parsed()) {
    const TimeSeries a = load_series_file(file_a);
    const TimeSeries b = load_series_file(file_b);
    std::optional<int> band;
    if (band_flag >= 0) band = static_cast<int>(band_flag);
    std::cout.precision(17);
    std::cout << dtw_distance(a, b, band) << "\n";
    if (want_path) {
      const AlignmentResult r = dtw_alignment(a, b);
      for (const auto& p : r.path.points) std::cout << p.i << "," << p.j << "\n";
    }
    return 0;
  }

  if (train_cmd->parsed()) {
    LoadOptions opts;
    opts.z_normalize = train_flags.z_normalize;
    const Dataset train_set = load_dataset(train_path, opts);
    const int n = train_set.max_length;
    int m = elasticity;
    if (m <= 0 && ratio >= 0.0) m = std::max(1, static_cast<int>(std::ceil(ratio * n)));
    if (m <= 0) m = std::max(1, static_cast<int>(std::ceil(n / 10.0)));
    Hyperparams hp;
    hp.eta = eta;
    hp.margin = margin;
    hp.lambda = lambda;
    hp.max_epochs = epochs;
    hp.schedule = schedule_name == "inverse-t" ? Schedule::inverse_t : Schedule::constant;
    hp.divergence_radius = radius;
    hp.shuffle_seed = derive_seed(train_flags.seed, "cli/train/shuffle");
    const LossKind kind = loss_kind_from_string(kind_name);
    ElasticParams theta0 = init_params(n, m, derive_seed(train_flags.seed, "cli/train/init"));
    const auto [theta, report] = train(std::move(theta0), train_set.examples, kind, hp);
    save_model({kind, theta}, model_out);
    std::cout << "trained " << to_string(kind) << " on " << train_set.size() << " examples (n=" << n
              << ", m=" << m << ")\n"
              << "epochs=" << report.epochs_run << " updates=" << report.updates_applied
              << " train_error=" << report.final_train_error << "\n"
              << "model written to " << model_out << "\n";
    return 0;
  }

  if (eval_cmd->parsed()) {
    const StoredModel model = load_model(eval_model);
    LoadOptions opts;
    opts.z_normalize = eval_flags.z_normalize;
    const Dataset data = load_dataset(eval_data, opts);
    std::size_t wrong = 0;
    for (const auto& ex : data.examples)
      if (predict(model.params, ex.values) != ex.label) ++wrong;
    const double error = static_cast<double>(wrong) / static_cast<double>(data.size());
    if (eval_flags.format == "csv") {
      std::ostringstream csv;
      csv.precision(17);
      csv << "examples,errors,error_rate\n"
          << data.size() << ',' << wrong << ',' << error << '\n';
      if (eval_flags.out.empty() || eval_flags.out == "-") {
        std::cout << csv.str();
      } else {
        std::ofstream out(eval_flags.out);
        if (!out) throw DataError("cannot write report file: " + eval_flags.out);
        out << csv.str();
      }
    } else {
      nlohmann::json j;
      j["format_version"] = kReportFormat;
      j["task"] = "eval";
      j["model"] = eval_model;
      j["dataset"] = eval_data;
      j["examples"] = data.size();
      j["errors"] = wrong;
      j["error_rate"] = error;
      if (eval_flags.out.empty() || eval_flags.out == "-") {
        std::cout << j.dump(2) << "\n";
      } else {
        std::ofstream out(eval_flags.out);
        if (!out) throw DataError("cannot write report file: " + eval_flags.out);
        out << j.dump(2) << "\n";
      }
    }
    return 0;
  }

  if (mean_cmd->parsed()) {
    LoadOptions opts;
    opts.require_two_class = false;
    const Dataset data = load_dataset(mean_data, opts);
    MeanConfig cfg;
    cfg.elasticity = mean_elasticity;
    cfg.max_iters = mean_iters;
    cfg.tol = mean_tol;
    const MeanState state = compute_mean(series_of(data), cfg);
    std::cout.precision(17);
    std::cout << "variation " << state.variation << " after " << state.iterations
              << " iterations (" << state.Y.rows() << "x" << state.Y.cols() << ")\n";
    if (!mean_out.empty()) {
      PrototypeSet protos;
      protos.mode = "mean";
      protos.entries.push_back({0, state.Y});
      save_prototypes(protos, mean_out);
      std::cout << "mean written to " << mean_out << "\n";
    }
    return 0;
  }

  if (sweep_cmd->parsed()) {
    ExperimentConfig cfg;
    cfg.train_path = sweep_train;
    cfg.test_path = sweep_test;
    cfg.kind = loss_kind_from_string(sweep_kind);
    cfg.trials = sweep_flags.trials;
    cfg.master_seed = sweep_flags.seed;
    cfg.threads = sweep_flags.threads;
    cfg.z_normalize = sweep_flags.z_normalize;
    cfg.base.max_epochs = sweep_epochs;
    const SweepReport report = elasticity_sweep(cfg);
    emit_report(report, sweep_flags.format, sweep_flags.out);
    if (!sweep_flags.out.empty() && sweep_flags.out != "-")
      std::cout << "sweep report written to " << sweep_flags.out << " (" << report.rows.size()
                << " rows)\n";
    return 0;
  }

  if (nn_cmd->parsed()) {
    ExperimentConfig cfg;
    cfg.train_path = nn_train;
    cfg.test_path = nn_test;
    cfg.threads = nn_flags.threads;
    cfg.z_normalize = nn_flags.z_normalize;
    cfg.elasticity = nn_elasticity;
    if (nn_band >= 0) cfg.band = static_cast<int>(nn_band);
    const ErrorReport report = nn_experiment(cfg, nn_mode_from_string(nn_mode));
    emit_report(report, nn_flags.format, nn_flags.out);
    if (!nn_flags.out.empty() && nn_flags.out != "-")
      std::cout << "nn report written to " << nn_flags.out << " (error "
                << 100.0 * report.mean_error << "%)\n";
    return 0;
  }

  if (bench_cmd->parsed()) {
    ExperimentConfig cfg;
    cfg.train_path = bench_train;
    cfg.test_path = bench_test;
    cfg.kind = loss_kind_from_string(bench_kind);
    cfg.elasticity = bench_elasticity;
    cfg.elasticity_ratio = bench_ratio;
    cfg.trials = bench_flags.trials;
    cfg.master_seed = bench_flags.seed;
    cfg.threads = bench_flags.threads;
    cfg.z_normalize = bench_flags.z_normalize;
    cfg.base.max_epochs = bench_epochs;
    bench_fixed = eta_opt->count() > 0;
    if (bench_fixed) {
      cfg.fixed_params = true;
      cfg.base.eta = bench_eta;
      cfg.base.margin = bench_margin;
      cfg.base.lambda = bench_lambda;
    }
    const ErrorReport report = run_experiment(cfg);
    emit_report(report, bench_flags.format, bench_flags.out);
    if (!bench_flags.out.empty() && bench_flags.out != "-")
      std::cout << "bench report written to " << bench_flags.out << " (mean error "
                << 100.0 * report.mean_error << "% +/- " << 100.0 * report.std_error << ")\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const warplearn::NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const warplearn::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
