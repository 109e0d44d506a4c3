#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warplearn/types.hpp"
#include "warplearn/warping.hpp"

namespace warplearn {

// Optimal alignment between two series. `cost` is the summed squared local
// cost along `path`; the DTW distance is sqrt(cost).
struct AlignmentResult {
  double cost = 0.0;
  WarpingPath path;

  double distance() const { return std::sqrt(cost); }
};

namespace detail {

inline void check_series_nonempty(const TimeSeries& s, const char* name) {
  if (s.empty()) throw std::invalid_argument(std::string(name) + ": series must be non-empty");
}

inline double sq(double d) { return d * d; }

// Shared traceback over an accumulated score matrix. Ties prefer the
// diagonal step, then the vertical (i-1,j), then the horizontal (i,j-1), so
// active paths are deterministic.
template <class Better>
WarpingPath traceback_scores(const std::vector<std::vector<double>>& s, Better better_or_equal) {
  const int rows = static_cast<int>(s.size());
  const int cols = static_cast<int>(s[0].size());
  WarpingPath path;
  int i = rows - 1, j = cols - 1;
  path.points.push_back({i + 1, j + 1});
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = s[i - 1][j - 1];
      const double vert = s[i - 1][j];
      const double horiz = s[i][j - 1];
      if (better_or_equal(diag, vert) && better_or_equal(diag, horiz)) {
        --i;
        --j;
      } else if (better_or_equal(vert, horiz)) {
        --i;
      } else {
        --j;
      }
    }
    path.points.push_back({i + 1, j + 1});
  }
  std::reverse(path.points.begin(), path.points.end());
  return path;
}

}  // namespace detail

// DTW distance with squared-difference local costs: the square root of the
// minimal summed squared differences over all warping paths. An optional
// Sakoe-Chiba band restricts paths to cells with |i - j| <= band.
inline double dtw_distance(const TimeSeries& x, const TimeSeries& y,
                           std::optional<int> band = std::nullopt) {
  detail::check_series_nonempty(x, "dtw_distance(x)");
  detail::check_series_nonempty(y, "dtw_distance(y)");
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(y.size());
  int r = -1;
  if (band) {
    r = *band;
    if (r < 0) throw std::invalid_argument("band radius must be nonnegative");
    if (std::abs(n - m) > r)
      throw std::invalid_argument("infeasible Sakoe-Chiba band: |" + std::to_string(n) + " - " +
                                  std::to_string(m) + "| > " + std::to_string(r));
  }
  const double inf = std::numeric_limits<double>::infinity();
  const auto allowed = [&](int i, int j) { return r < 0 || std::abs(i - j) <= r; };

  std::vector<double> prev(static_cast<std::size_t>(m), inf);
  std::vector<double> curr(static_cast<std::size_t>(m), inf);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (!allowed(i + 1, j + 1)) {
        curr[static_cast<std::size_t>(j)] = inf;
        continue;
      }
      const double c = detail::sq(x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]);
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = curr[static_cast<std::size_t>(j - 1)];
      } else if (j == 0) {
        best = prev[0];
      } else {
        best = std::min({prev[static_cast<std::size_t>(j)], curr[static_cast<std::size_t>(j - 1)],
                         prev[static_cast<std::size_t>(j - 1)]});
      }
      curr[static_cast<std::size_t>(j)] = c + best;
    }
    std::swap(prev, curr);
  }
  return std::sqrt(prev[static_cast<std::size_t>(m - 1)]);
}

// DTW with traceback: minimal-cost path plus its summed squared cost.
inline AlignmentResult dtw_alignment(const TimeSeries& x, const TimeSeries& y) {
  detail::check_series_nonempty(x, "dtw_alignment(x)");
  detail::check_series_nonempty(y, "dtw_alignment(y)");
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(y.size());
  std::vector<std::vector<double>> s(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(m), 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double c = detail::sq(x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(j)]);
      double best = 0.0;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = s[0][static_cast<std::size_t>(j - 1)];
      } else if (j == 0) {
        best = s[static_cast<std::size_t>(i - 1)][0];
      } else {
        best = std::min({s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)],
                         s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)],
                         s[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]});
      }
      s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = c + best;
    }
  }
  AlignmentResult result;
  result.cost = s[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(m - 1)];
  result.path = detail::traceback_scores(s, [](double a, double b) { return a <= b; });
  return result;
}

}  // namespace warplearn
