#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "warplearn/types.hpp"

namespace warplearn {

// Largest rows+cols the exhaustive enumerator accepts. Path counts grow like
// Delannoy numbers, so this keeps oracle runs bounded.
inline constexpr int kEnumerationLimit = 22;

// True iff `path` starts at (1,1), ends at (rows,cols) and every step is
// (1,0), (0,1) or (1,1). Pure predicate, never throws.
inline bool validate_path(const WarpingPath& path, GridDims dims) {
  const auto& pts = path.points;
  if (pts.empty()) return false;
  if (!(pts.front() == PathPoint{1, 1})) return false;
  if (!(pts.back() == PathPoint{dims.rows, dims.cols})) return false;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const int di = pts[k + 1].i - pts[k].i;
    const int dj = pts[k + 1].j - pts[k].j;
    const bool legal = (di == 1 && dj == 0) || (di == 0 && dj == 1) || (di == 1 && dj == 1);
    if (!legal) return false;
  }
  return true;
}

inline void check_grid(GridDims dims) {
  if (dims.rows < 1 || dims.cols < 1)
    throw std::invalid_argument("grid dimensions must be positive, got " +
                                std::to_string(dims.rows) + "x" + std::to_string(dims.cols));
}

// Number of warping paths via the recurrence
// c(i,j) = c(i-1,j) + c(i,j-1) + c(i-1,j-1), c(1,1) = 1.
inline long long count_warping_paths(GridDims dims) {
  check_grid(dims);
  std::vector<long long> row(static_cast<std::size_t>(dims.cols), 0);
  row[0] = 1;
  for (int j = 1; j < dims.cols; ++j) row[static_cast<std::size_t>(j)] = 1;
  for (int i = 1; i < dims.rows; ++i) {
    std::vector<long long> next(static_cast<std::size_t>(dims.cols), 0);
    next[0] = 1;
    for (int j = 1; j < dims.cols; ++j) {
      const auto js = static_cast<std::size_t>(j);
      next[js] = next[js - 1] + row[js] + row[js - 1];
    }
    row = std::move(next);
  }
  return row.back();
}

namespace detail {

inline void enumerate_paths_rec(GridDims dims, WarpingPath& current,
                                std::vector<WarpingPath>& out) {
  const PathPoint p = current.points.back();
  if (p.i == dims.rows && p.j == dims.cols) {
    out.push_back(current);
    return;
  }
  // Depth-first over the three step kinds, diagonal first.
  if (p.i < dims.rows && p.j < dims.cols) {
    current.points.push_back({p.i + 1, p.j + 1});
    enumerate_paths_rec(dims, current, out);
    current.points.pop_back();
  }
  if (p.i < dims.rows) {
    current.points.push_back({p.i + 1, p.j});
    enumerate_paths_rec(dims, current, out);
    current.points.pop_back();
  }
  if (p.j < dims.cols) {
    current.points.push_back({p.i, p.j + 1});
    enumerate_paths_rec(dims, current, out);
    current.points.pop_back();
  }
}

}  // namespace detail

// Exhaustively enumerates every valid warping path of the grid. Intended as
// a brute-force oracle for the dynamic programs; guarded so test runs stay
// bounded.
inline std::vector<WarpingPath> enumerate_warping_paths(GridDims dims) {
  check_grid(dims);
  if (dims.rows + dims.cols > kEnumerationLimit)
    throw std::invalid_argument("oracle limit exceeded: grid " + std::to_string(dims.rows) +
                                "x" + std::to_string(dims.cols) + " is too large to enumerate");
  std::vector<WarpingPath> out;
  WarpingPath current;
  current.points.push_back({1, 1});
  detail::enumerate_paths_rec(dims, current, out);
  return out;
}

}  // namespace warplearn
