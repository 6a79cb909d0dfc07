#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "lsuss/common.hpp"
#include "lsuss/matprof.hpp"

using namespace lsuss;

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = g(rng);
  return x;
}

// naive z-normalized distance between two equal-length slices
double naive_znorm_distance(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = a.size();
  auto znorm = [m](const std::vector<double>& x) {
    double mu = 0.0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (double v : x) var += (v - mu) * (v - mu);
    var /= static_cast<double>(m);
    const double sig = std::sqrt(var);
    std::vector<double> z(m);
    for (std::size_t i = 0; i < m; ++i) z[i] = (x[i] - mu) / sig;
    return z;
  };
  const auto za = znorm(a), zb = znorm(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) acc += (za[i] - zb[i]) * (za[i] - zb[i]);
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("exclusion radius is the rounded-up quarter window") {
  CHECK(exclusion_radius(4) == 1);
  CHECK(exclusion_radius(5) == 2);
  CHECK(exclusion_radius(8) == 2);
  CHECK(exclusion_radius(9) == 3);
  CHECK(exclusion_radius(100) == 25);
}

TEST_CASE("mass distance profile matches the naive per-pair computation") {
  const auto series = random_series(200, 3);
  const std::size_t m = 16;
  std::vector<double> query(series.begin() + 40, series.begin() + 40 + m);
  const auto dp = mass_distance_profile(query, series);
  REQUIRE(dp.values.size() == series.size() - m + 1);
  for (std::size_t j = 0; j < dp.values.size(); j += 7) {
    std::vector<double> window(series.begin() + static_cast<std::ptrdiff_t>(j),
                               series.begin() + static_cast<std::ptrdiff_t>(j + m));
    CHECK(dp.values[j] == Catch::Approx(naive_znorm_distance(query, window)).margin(1e-8));
  }
  // the query's own position has distance 0
  CHECK(dp.values[40] == Catch::Approx(0.0).margin(1e-7));
}

TEST_CASE("mass rejects degenerate shapes") {
  CHECK_THROWS_AS(mass_distance_profile({1.0}, {1.0, 2.0, 3.0}), invalid_window_error);
  CHECK_THROWS_AS(mass_distance_profile({1.0, 2.0, 3.0, 4.0}, {1.0, 2.0}),
                  invalid_window_error);
}

TEST_CASE("degenerate sigma rule: constant windows") {
  // flat region inside an otherwise varying series
  std::vector<double> series = random_series(64, 5);
  for (std::size_t i = 20; i < 36; ++i) series[i] = 2.5;
  const std::size_t m = 8;

  std::vector<double> const_query(m, 7.0);
  const auto dp = mass_distance_profile(const_query, series);
  // both constant -> 0 (windows fully inside the flat region)
  CHECK(dp.values[24] == 0.0);
  // exactly one constant -> sqrt(m)
  CHECK(dp.values[0] == Catch::Approx(std::sqrt(static_cast<double>(m))));
}

TEST_CASE("degenerate rule survives a large offset that defeats cumulative sums") {
  // variance ~1e-12 relative to the mean square: naive cumsum variance is junk,
  // but exact min==max detection must still classify the flat windows
  std::vector<double> series(64, 1e9);
  for (std::size_t i = 0; i < 16; ++i) series[32 + i] = 1e9 + std::sin(double(i));
  const std::size_t m = 8;
  std::vector<double> q(m, 5.0);
  const auto dp = mass_distance_profile(q, series);
  CHECK(dp.values[0] == 0.0);
  CHECK(dp.values[34] == Catch::Approx(std::sqrt(8.0)));
}

TEST_CASE("stamp equals the brute-force oracle on random instances") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t n = 80 + static_cast<std::size_t>(rng() % 120);
    const std::size_t m = (rep % 2 == 0) ? 8 : 16;
    const auto series = random_series(n, rng());
    const std::optional<std::size_t> tc =
        (rep % 3 == 0) ? std::optional<std::size_t>(3 * m) : std::nullopt;
    const Direction dir = (rep % 2 == 0) ? Direction::bidirectional : Direction::forward_only;
    const auto fast = stamp(series, m, tc, dir);
    const auto slow = brute_force_mp(series, m, tc, dir);
    REQUIRE(fast.profile.size() == slow.profile.size());
    for (std::size_t i = 0; i < fast.profile.size(); ++i) {
      if (std::isinf(slow.profile[i])) {
        CHECK(std::isinf(fast.profile[i]));
        CHECK(fast.index[i] == kNoNeighbor);
      } else {
        CHECK(fast.profile[i] ==
              Catch::Approx(slow.profile[i]).margin(1e-8).epsilon(1e-8));
        CHECK(fast.index[i] == slow.index[i]);
      }
    }
  }
}

TEST_CASE("stamp output is independent of the thread budget") {
  const auto series = random_series(300, 17);
  set_thread_budget(1);
  const auto one = stamp(series, 8);
  set_thread_budget(5);
  const auto five = stamp(series, 8);
  set_thread_budget(1);
  CHECK(one.profile == five.profile);
  CHECK(one.index == five.index);
}

TEST_CASE("forward-only profiles never point backwards") {
  const auto series = random_series(256, 23);
  const auto pp = stamp(series, 8, 40, Direction::forward_only);
  for (std::size_t i = 0; i < pp.index.size(); ++i) {
    if (pp.index[i] == kNoNeighbor) continue;
    CHECK(pp.index[i] > static_cast<std::ptrdiff_t>(i));
    CHECK(pp.index[i] - static_cast<std::ptrdiff_t>(i) <= 40);
  }
}

TEST_CASE("temporal constraint bounds every neighbor") {
  const auto series = random_series(256, 29);
  const std::size_t m = 8, tc = 24;
  const auto pp = stamp(series, m, tc);
  const auto excl = static_cast<std::ptrdiff_t>(exclusion_radius(m));
  for (std::size_t i = 0; i < pp.index.size(); ++i) {
    REQUIRE(pp.index[i] != kNoNeighbor);
    const auto d = std::abs(pp.index[i] - static_cast<std::ptrdiff_t>(i));
    CHECK(d >= excl);
    CHECK(d <= static_cast<std::ptrdiff_t>(tc));
  }
}

TEST_CASE("stamp preconditions") {
  const auto series = random_series(20, 31);
  CHECK_THROWS_AS(stamp(series, 11), invalid_window_error);
  CHECK_THROWS_AS(stamp(series, 1), invalid_window_error);
  CHECK_THROWS_AS(brute_force_mp(random_series(64, 1), 8, std::nullopt,
                                 Direction::bidirectional, 32),
                  oracle_cap_error);
}
