#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <warplearn/mean.hpp>
#include <warplearn/rng.hpp>

#include "oracles.hpp"

using namespace warplearn;

namespace {

std::vector<TimeSeries> random_set(std::mt19937_64& rng, int count, int max_len) {
  std::vector<TimeSeries> out;
  for (int i = 0; i < count; ++i)
    out.push_back(oracles::random_series(rng, 1 + static_cast<int>(rng() % max_len)));
  return out;
}

}  // namespace

TEST_CASE("variation basics") {
  SECTION("empty set has variation zero") {
    CHECK(variation(Matrix::Zero(3, 3), {}) == 0.0);
  }
  SECTION("a matrix carrying the series on a path has variation zero") {
    Matrix Y(2, 2);
    Y << 1, 9, 9, 2;
    CHECK(variation(Y, {TimeSeries{1, 2}}) == 0.0);
  }
  SECTION("identical-row matrices reduce to summed squared DTW distances") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      const TimeSeries z = oracles::random_series(rng, 1 + static_cast<int>(rng() % 5));
      const auto data = random_set(rng, 4, 5);
      const Matrix Y = identical_row_matrix(z, 5);
      double expected = 0.0;
      for (const auto& x : data) {
        const double d = dtw_distance(x, z);
        expected += d * d;
      }
      REQUIRE(variation(Y, data) == Catch::Approx(expected).margin(1e-9));
    }
  }
}

TEST_CASE("mean_step on a singleton embeds the series exactly") {
  std::mt19937_64 rng(7);
  const TimeSeries x = oracles::random_series(rng, 4);
  const Matrix Y = oracles::random_matrix(rng, 5, 4);
  const Matrix next = mean_step(Y, {x}, 1.0);
  CHECK(variation(next, {x}) == 0.0);
  // Cells on the active path carry x bitwise, everything else is unchanged.
  const auto d = elastic_euclidean(x, Y);
  Matrix expected = Y;
  for (const auto& p : d.path.points) expected(p.i - 1, p.j - 1) = x[static_cast<std::size_t>(p.i - 1)];
  REQUIRE(oracles::matrices_equal(next, expected));
}

TEST_CASE("mean_step with duplicates reaches variation zero in one step") {
  std::mt19937_64 rng(11);
  const TimeSeries x = oracles::random_series(rng, 5);
  const Matrix Y = oracles::random_matrix(rng, 5, 5);
  const Matrix next = mean_step(Y, {x, x}, 0.5);
  CHECK(variation(next, {x, x}) == 0.0);
}

TEST_CASE("averaging updates never increase the variation") {
  std::mt19937_64 rng(13);
  for (int instance = 0; instance < 30; ++instance) {
    const auto data = random_set(rng, 1 + static_cast<int>(rng() % 6), 6);
    std::size_t max_len = 0;
    for (const auto& x : data) max_len = std::max(max_len, x.size());
    Matrix Y = oracles::random_matrix(rng, static_cast<int>(max_len), 1 + static_cast<int>(rng() % 5));
    const double eta = 1.0 / static_cast<double>(data.size());
    double f = variation(Y, data);
    for (int it = 0; it < 10; ++it) {
      Y = mean_step(Y, data, eta);
      const double next_f = variation(Y, data);
      REQUIRE(next_f <= f + 1e-9);
      f = next_f;
    }
  }
}

TEST_CASE("mean_step validates its inputs") {
  CHECK_THROWS_AS(mean_step(Matrix::Zero(2, 2), {}, 1.0), std::invalid_argument);
}

TEST_CASE("compute_mean on singletons and duplicate pairs") {
  std::mt19937_64 rng(17);
  const TimeSeries x = oracles::random_series(rng, 6);
  SECTION("singleton reaches variation zero") {
    const MeanState state = compute_mean({x});
    CHECK(state.variation == 0.0);
  }
  SECTION("two identical series reach variation zero") {
    const MeanState state = compute_mean({x, x});
    CHECK(state.variation == 0.0);
  }
}

TEST_CASE("compute_mean improves on identical-row baselines") {
  std::mt19937_64 rng(19);
  for (int instance = 0; instance < 10; ++instance) {
    const auto data = random_set(rng, 2 + static_cast<int>(rng() % 5), 6);
    std::size_t max_len = 0;
    for (const auto& x : data) max_len = std::max(max_len, x.size());
    const int n = static_cast<int>(max_len);

    MeanConfig cfg;
    cfg.max_iters = 100;
    const MeanState state = compute_mean(data, cfg);

    // Not worse than the starting point...
    const TimeSeries seed = resample_linear(data[medoid_index(data)], n);
    REQUIRE(state.variation <= variation(identical_row_matrix(seed, n), data) + 1e-9);
    // ...and not worse than any member used as an identical-row matrix.
    for (const auto& x : data) {
      const Matrix baseline = identical_row_matrix(resample_linear(x, n), n);
      REQUIRE(state.variation <= variation(baseline, data) + 1e-9);
    }
  }
}

TEST_CASE("identical-row start aligns active paths with plain DTW") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const TimeSeries z = oracles::random_series(rng, 4);
    const TimeSeries x = oracles::random_series(rng, 1 + static_cast<int>(rng() % 4));
    const Matrix Y = identical_row_matrix(z, 4);
    const auto elastic_path = elastic_euclidean(x, Y).path;
    const auto dtw_path = dtw_alignment(x, z).path;
    REQUIRE(elastic_path == dtw_path);
  }
}

TEST_CASE("resample_linear endpoints and degenerate cases") {
  CHECK(resample_linear({1, 2, 3}, 3) == TimeSeries{1, 2, 3});
  CHECK(resample_linear({4}, 3) == TimeSeries{4, 4, 4});
  const TimeSeries r = resample_linear({0, 1}, 3);
  REQUIRE(r.size() == 3);
  CHECK(r.front() == 0.0);
  CHECK(r[1] == Catch::Approx(0.5).margin(1e-15));
  CHECK(r.back() == 1.0);
  CHECK(resample_linear({0, 1, 2, 3}, 1) == TimeSeries{1.5});
}

TEST_CASE("medoid_index picks the most central series") {
  const std::vector<TimeSeries> data{{0, 0}, {0.1, 0.1}, {5, 5}};
  CHECK(medoid_index(data) == 1);
}
