#pragma once

#include <cstddef>
#include <vector>

namespace warplearn {

// A univariate time series: ordered real samples, length >= 1, all finite.
using TimeSeries = std::vector<double>;

// A training/test example. Labels are +1/-1 after two-class mapping.
struct LabeledSeries {
  int label = 0;
  TimeSeries values;
};

// 1-based cell of an alignment grid.
struct PathPoint {
  int i = 0;
  int j = 0;
  friend bool operator==(const PathPoint&, const PathPoint&) = default;
};

struct GridDims {
  int rows = 0;
  int cols = 0;
};

// Monotone step-constrained path from (1,1) to (rows,cols); steps are
// (1,0), (0,1) or (1,1), so points are strictly ascending lexicographically.
struct WarpingPath {
  std::vector<PathPoint> points;

  std::size_t size() const { return points.size(); }
  friend bool operator==(const WarpingPath&, const WarpingPath&) = default;
};

}  // namespace warplearn
