#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "warplearn/errors.hpp"
#include "warplearn/experiment.hpp"
#include "warplearn/version.hpp"

namespace warplearn {

namespace detail {

inline const char* schedule_name(Schedule s) {
  return s == Schedule::constant ? "constant" : "inverse-t";
}

inline nlohmann::json params_json(const Hyperparams& hp) {
  nlohmann::json j;
  j["eta"] = hp.eta;
  j["margin"] = hp.margin;
  j["lambda"] = hp.lambda;
  j["max_epochs"] = hp.max_epochs;
  j["schedule"] = schedule_name(hp.schedule);
  j["divergence_radius"] = hp.divergence_radius;
  return j;
}

}  // namespace detail

// Deterministic report body: everything except timing. Reruns with the same
// master seed produce byte-identical payloads.
inline nlohmann::json report_payload(const ErrorReport& report) {
  nlohmann::json j;
  j["format_version"] = kReportFormat;
  j["library_version"] = kLibraryVersion;
  j["task"] = report.task;
  j["classifier"] = report.classifier;
  j["dataset"] = {{"name", report.dataset_name},
                  {"train_path", report.train_path},
                  {"test_path", report.test_path},
                  {"train_size", report.train_size},
                  {"test_size", report.test_size},
                  {"max_length", report.max_length},
                  {"label_map", {{"negative", report.raw_negative},
                                 {"positive", report.raw_positive}}},
                  {"z_normalized", report.z_normalized}};
  j["elasticity"] = {{"m", report.elasticity}, {"rule", report.elasticity_rule}};
  j["seed"] = report.master_seed;
  j["params"] = detail::params_json(report.selected);
  j["selection"] = {{"method", report.selected_by_grid ? "grid-search" : "fixed"},
                    {"cv_error", report.cv_error}};
  nlohmann::json trials = nlohmann::json::array();
  for (const TrialOutcome& t : report.outcomes) {
    trials.push_back({{"trial", t.trial},
                      {"test_error", t.test_error},
                      {"updates", t.updates},
                      {"epochs", t.epochs}});
  }
  j["trials"] = std::move(trials);
  j["mean_error"] = report.mean_error;
  j["std_error"] = report.std_error;
  return j;
}

inline nlohmann::json report_full(const ErrorReport& report) {
  nlohmann::json j = report_payload(report);
  j["timing"] = {{"total_seconds", report.total_seconds}};
  return j;
}

// One row per trial plus a summary row.
inline std::string report_csv(const ErrorReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "row,trial,test_error,updates,epochs\n";
  for (const TrialOutcome& t : report.outcomes)
    out << "trial," << t.trial << ',' << t.test_error << ',' << t.updates << ',' << t.epochs
        << '\n';
  out << "summary,," << report.mean_error << ",,\n";
  out << "summary_std,," << report.std_error << ",,\n";
  return out.str();
}

inline nlohmann::json sweep_payload(const SweepReport& report) {
  nlohmann::json j;
  j["format_version"] = kReportFormat;
  j["library_version"] = kLibraryVersion;
  j["task"] = "sweep";
  j["classifier"] = report.classifier;
  j["dataset"] = {{"name", report.dataset_name},
                  {"train_path", report.train_path},
                  {"test_path", report.test_path}};
  j["trials"] = report.trials;
  j["seed"] = report.master_seed;
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& r : report.rows) {
    rows.push_back({{"w", r.w},
                    {"m", r.elasticity},
                    {"eta", r.eta},
                    {"mean_error", r.mean_error},
                    {"std_error", r.std_error}});
  }
  j["rows"] = std::move(rows);
  return j;
}

inline nlohmann::json sweep_full(const SweepReport& report) {
  nlohmann::json j = sweep_payload(report);
  j["timing"] = {{"total_seconds", report.total_seconds}};
  return j;
}

inline std::string sweep_csv(const SweepReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "w,m,eta,mean_error,std_error\n";
  for (const SweepRow& r : report.rows)
    out << r.w << ',' << r.elasticity << ',' << r.eta << ',' << r.mean_error << ','
        << r.std_error << '\n';
  return out.str();
}

namespace detail {

inline void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report file: " + path);
  out << text;
  if (!out) throw DataError("failed while writing report file: " + path);
}

}  // namespace detail

// Writes the report in the requested format ("json" or "csv"); an empty
// path or "-" targets stdout.
inline void emit_report(const ErrorReport& report, const std::string& format,
                        const std::string& path) {
  if (format == "json")
    detail::write_text(report_full(report).dump(2) + "\n", path);
  else if (format == "csv")
    detail::write_text(report_csv(report), path);
  else
    throw std::invalid_argument("unknown report format: " + format);
}

inline void emit_report(const SweepReport& report, const std::string& format,
                        const std::string& path) {
  if (format == "json")
    detail::write_text(sweep_full(report).dump(2) + "\n", path);
  else if (format == "csv")
    detail::write_text(sweep_csv(report), path);
  else
    throw std::invalid_argument("unknown report format: " + format);
}

}  // namespace warplearn
