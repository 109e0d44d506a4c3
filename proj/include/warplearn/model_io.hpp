#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "warplearn/classifier.hpp"
#include "warplearn/cluster.hpp"
#include "warplearn/elastic.hpp"
#include "warplearn/errors.hpp"
#include "warplearn/version.hpp"

namespace warplearn {

// Classifier container: format version, loss kind, dimensions, bias and the
// weight matrix in row-major order. JSON with shortest round-trip doubles,
// so save/load is lossless.
struct StoredModel {
  LossKind kind = LossKind::perceptron;
  ElasticParams params;
};

namespace detail {

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw DataError(what + ": expected a non-empty matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw DataError(what + ": ragged matrix rows");
    for (Eigen::Index jx = 0; jx < cols; ++jx)
      m(i, jx) = row.at(static_cast<std::size_t>(jx)).get<double>();
  }
  return m;
}

inline nlohmann::json read_json_file(const std::string& path, const char* expected_format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": invalid JSON: " + e.what());
  }
  if (j.value("format_version", std::string{}) != expected_format)
    throw DataError(path + ": expected format_version '" + expected_format + "', got '" +
                    j.value("format_version", std::string{"<missing>"}) + "'");
  return j;
}

inline void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("failed while writing file: " + path);
}

}  // namespace detail

inline void save_model(const StoredModel& model, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = kModelFormat;
  j["library_version"] = kLibraryVersion;
  j["loss"] = to_string(model.kind);
  j["rows"] = model.params.rows();
  j["cols"] = model.params.cols();
  j["bias"] = model.params.b;
  j["weights"] = detail::matrix_to_json(model.params.W);
  detail::write_json_file(j, path);
}

inline StoredModel load_model(const std::string& path) {
  const nlohmann::json j = detail::read_json_file(path, kModelFormat);
  StoredModel model;
  model.kind = loss_kind_from_string(j.at("loss").get<std::string>());
  model.params.W = detail::matrix_from_json(j.at("weights"), path);
  model.params.b = j.at("bias").get<double>();
  if (model.params.rows() != j.at("rows").get<int>() ||
      model.params.cols() != j.at("cols").get<int>())
    throw DataError(path + ": declared dimensions do not match the stored matrix");
  return model;
}

// Prototype sets share the container format, tagged with their mode and
// class labels.
inline void save_prototypes(const PrototypeSet& protos, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = kPrototypeFormat;
  j["library_version"] = kLibraryVersion;
  j["mode"] = protos.mode;
  nlohmann::json entries = nlohmann::json::array();
  for (const Prototype& p : protos.entries) {
    nlohmann::json e;
    e["label"] = p.label;
    e["rows"] = static_cast<int>(p.weights.rows());
    e["cols"] = static_cast<int>(p.weights.cols());
    e["weights"] = detail::matrix_to_json(p.weights);
    entries.push_back(std::move(e));
  }
  j["prototypes"] = std::move(entries);
  detail::write_json_file(j, path);
}

inline PrototypeSet load_prototypes(const std::string& path) {
  const nlohmann::json j = detail::read_json_file(path, kPrototypeFormat);
  PrototypeSet protos;
  protos.mode = j.value("mode", std::string{});
  for (const auto& e : j.at("prototypes")) {
    Prototype p;
    p.label = e.at("label").get<int>();
    p.weights = detail::matrix_from_json(e.at("weights"), path);
    protos.entries.push_back(std::move(p));
  }
  return protos;
}

}  // namespace warplearn
