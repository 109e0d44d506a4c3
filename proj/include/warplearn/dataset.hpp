#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "warplearn/errors.hpp"
#include "warplearn/types.hpp"

namespace warplearn {

// Labeled collection in UCR-style row format: one example per line, first
// field the class label, remaining fields the samples.
struct Dataset {
  std::string name;
  std::vector<LabeledSeries> examples;
  int max_length = 0;
  // Raw label values behind the two-class mapping: raw_negative -> -1,
  // raw_positive -> +1 (ascending numeric order).
  double raw_negative = 0.0;
  double raw_positive = 0.0;

  std::size_t size() const { return examples.size(); }
};

struct LoadOptions {
  char delimiter = '\0';          // '\0' = autodetect (tab, then comma, then spaces)
  bool z_normalize = false;       // per-series standardization, off by default
  bool require_two_class = true;  // map the two raw labels onto {-1,+1}
};

namespace detail {

inline double parse_field(std::string_view field, std::size_t line_no, const std::string& path) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin != end && (*begin == ' ' || *begin == '\r')) ++begin;
  while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\r')) --end;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw DataError(path + ":" + std::to_string(line_no) + ": unparseable field '" +
                    std::string(field) + "'");
  if (!std::isfinite(value))
    throw DataError(path + ":" + std::to_string(line_no) + ": non-finite value '" +
                    std::string(field) + "'");
  return value;
}

inline std::vector<std::string_view> split_fields(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  if (delim == ' ') {
    // Whitespace mode: any run of spaces/tabs separates fields.
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

inline void z_normalize_series(TimeSeries& x) {
  double mean = 0.0;
  for (const double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (const double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  const double sd = std::sqrt(var);
  for (double& v : x) v = sd > 1e-12 ? (v - mean) / sd : 0.0;
}

}  // namespace detail

// Parses a UCR-style file. Delimiter is autodetected from the first data
// line unless pinned in the options; blank lines are ignored; scientific
// notation is accepted; series lengths may vary.
inline Dataset load_dataset(const std::string& path, const LoadOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);

  Dataset ds;
  ds.name = std::filesystem::path(path).stem().string();

  std::vector<double> raw_labels;
  char delim = opts.delimiter;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::is_blank(line)) continue;
    if (delim == '\0')
      delim = line.find('\t') != std::string::npos ? '\t'
              : line.find(',') != std::string::npos ? ','
                                                    : ' ';
    const auto fields = detail::split_fields(line, delim);
    std::vector<std::string_view> nonempty;
    for (const auto f : fields)
      if (!detail::is_blank(f)) nonempty.push_back(f);
    if (nonempty.size() < 2)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected a label and at least one sample");
    LabeledSeries ex;
    raw_labels.push_back(detail::parse_field(nonempty[0], line_no, path));
    ex.values.reserve(nonempty.size() - 1);
    for (std::size_t i = 1; i < nonempty.size(); ++i)
      ex.values.push_back(detail::parse_field(nonempty[i], line_no, path));
    if (opts.z_normalize) detail::z_normalize_series(ex.values);
    ds.max_length = std::max(ds.max_length, static_cast<int>(ex.values.size()));
    ds.examples.push_back(std::move(ex));
  }
  if (ds.examples.size() < 2)
    throw DataError(path + ": dataset must contain at least 2 rows, found " +
                    std::to_string(ds.examples.size()));

  const std::set<double> distinct(raw_labels.begin(), raw_labels.end());
  if (opts.require_two_class) {
    if (distinct.size() != 2) {
      std::ostringstream msg;
      msg << path << ": two-class run requires exactly 2 distinct labels, found "
          << distinct.size() << " (";
      bool first = true;
      for (const double l : distinct) {
        if (!first) msg << ", ";
        msg << l;
        first = false;
      }
      msg << ")";
      throw DataError(msg.str());
    }
    ds.raw_negative = *distinct.begin();
    ds.raw_positive = *std::next(distinct.begin());
    for (std::size_t i = 0; i < ds.examples.size(); ++i)
      ds.examples[i].label = raw_labels[i] == ds.raw_positive ? 1 : -1;
  } else {
    for (std::size_t i = 0; i < ds.examples.size(); ++i)
      ds.examples[i].label = static_cast<int>(raw_labels[i]);
  }
  return ds;
}

// Writes a dataset back out with shortest round-trip precision, so
// write-then-read reproduces every value exactly.
inline void save_dataset(const Dataset& ds, const std::string& path, char delimiter = '\t') {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file: " + path);
  out.precision(17);
  for (const LabeledSeries& ex : ds.examples) {
    out << ex.label;
    for (const double v : ex.values) out << delimiter << v;
    out << '\n';
  }
  if (!out) throw DataError("failed while writing dataset file: " + path);
}

// Series of a dataset without labels.
inline std::vector<TimeSeries> series_of(const Dataset& ds) {
  std::vector<TimeSeries> out;
  out.reserve(ds.examples.size());
  for (const LabeledSeries& ex : ds.examples) out.push_back(ex.values);
  return out;
}

}  // namespace warplearn
