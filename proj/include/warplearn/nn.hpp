#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "warplearn/cluster.hpp"
#include "warplearn/dtw.hpp"
#include "warplearn/elastic.hpp"
#include "warplearn/types.hpp"

namespace warplearn {

// Nearest neighbor over all reference series by DTW distance. Ties keep the
// first reference in stored order.
inline int nn_all_label(const TimeSeries& x, const std::vector<LabeledSeries>& refs,
                        std::optional<int> band = std::nullopt) {
  if (refs.empty()) throw std::invalid_argument("nn_all_label: empty reference set");
  double best = std::numeric_limits<double>::infinity();
  int label = refs.front().label;
  for (const LabeledSeries& ref : refs) {
    const double d = dtw_distance(x, ref.values, band);
    if (d < best) {
      best = d;
      label = ref.label;
    }
  }
  return label;
}

// Nearest prototype by elastic Euclidean distance. Ties keep the first
// entry in stored order.
inline int nn_prototype_label(const TimeSeries& x, const PrototypeSet& protos) {
  if (protos.entries.empty()) throw std::invalid_argument("nn_prototype_label: empty prototype set");
  double best = std::numeric_limits<double>::infinity();
  int label = protos.entries.front().label;
  for (const Prototype& p : protos.entries) {
    const double d = elastic_sq_euclidean(x, p.weights);
    if (d < best) {
      best = d;
      label = p.label;
    }
  }
  return label;
}

}  // namespace warplearn
