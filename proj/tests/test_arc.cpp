#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lsuss/arc.hpp"

using namespace lsuss;

namespace {

// O(L^2) interval-stabbing oracle: position k is crossed by arc (i,j) iff
// min < k < max.
std::vector<std::int64_t> stabbing_oracle(const std::vector<std::ptrdiff_t>& index) {
  const std::size_t L = index.size();
  std::vector<std::int64_t> counts(L, 0);
  for (std::size_t i = 0; i < L; ++i) {
    if (index[i] == kNoNeighbor) continue;
    const auto lo = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(i), index[i]);
    const auto hi = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(i), index[i]);
    for (std::size_t k = 0; k < L; ++k)
      if (static_cast<std::ptrdiff_t>(k) > lo && static_cast<std::ptrdiff_t>(k) < hi)
        ++counts[k];
  }
  return counts;
}

}  // namespace

TEST_CASE("arc curve equals the stabbing oracle on random index vectors") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t L = 8 + rng() % 504;
    std::vector<std::ptrdiff_t> index(L);
    std::uniform_int_distribution<std::ptrdiff_t> pick(-1, static_cast<std::ptrdiff_t>(L) - 1);
    for (auto& j : index) j = pick(rng);  // -1 doubles as the sentinel
    const auto ac = arc_curve(index);
    CHECK(ac.counts == stabbing_oracle(index));
  }
}

TEST_CASE("adjacent arcs have no strict interior") {
  const std::vector<std::ptrdiff_t> index{1, 0, 3, 2};
  const auto ac = arc_curve(index);
  CHECK(ac.counts == std::vector<std::int64_t>{0, 0, 0, 0});
}

TEST_CASE("one long arc covers exactly its interior") {
  std::vector<std::ptrdiff_t> index(6, kNoNeighbor);
  index[0] = 5;
  const auto ac = arc_curve(index);
  CHECK(ac.counts == std::vector<std::int64_t>{0, 1, 1, 1, 1, 0});
}

TEST_CASE("out-of-range neighbor index is rejected") {
  CHECK_THROWS_AS(arc_curve({0, 7}), invalid_index_error);
  CHECK_THROWS_AS(arc_curve({-5, 0}), invalid_index_error);
}

TEST_CASE("parabolic IAC matches the closed form") {
  const std::size_t L = 101;
  const auto iac = iac_parabolic(L);
  for (std::size_t i = 0; i < L; i += 10) {
    const double expected = 2.0 * double(i) * (double(L) - double(i)) / double(L);
    CHECK(iac.values[i] == Catch::Approx(expected));
  }
  CHECK(iac.values[0] == 0.0);
  CHECK_THROWS_AS(iac_parabolic(2), invalid_argument_error);
}

TEST_CASE("empirical IAC approximates the parabola for unconstrained arcs") {
  const std::size_t L = 400;
  const auto emp = iac_empirical(L, Direction::bidirectional, std::nullopt, 200, 0);
  const auto par = iac_parabolic(L);
  // compare away from the edges where relative error blows up
  for (std::size_t i = 40; i < L - 40; i += 20) {
    CHECK(emp.values[i] == Catch::Approx(par.values[i]).epsilon(0.05));
  }
}

TEST_CASE("empirical IAC is deterministic for a fixed seed") {
  const auto a = iac_empirical(128, Direction::forward_only, 30, 50, 42);
  const auto b = iac_empirical(128, Direction::forward_only, 30, 50, 42);
  CHECK(a.values == b.values);
  const auto c = iac_empirical(128, Direction::forward_only, 30, 50, 43);
  CHECK(a.values != c.values);
}

TEST_CASE("temporally constrained empirical IAC plateaus in the interior") {
  const std::size_t L = 300, tc = 30;
  const auto emp = iac_empirical(L, Direction::bidirectional, tc, 100, 0);
  // interior expectation depends only on tc, not on position
  const double mid = emp.values[L / 2];
  for (std::size_t i = 2 * tc; i < L - 2 * tc; i += 17)
    CHECK(emp.values[i] == Catch::Approx(mid).epsilon(0.15));
  // and is far below the unconstrained parabola peak L/2
  CHECK(mid < double(L) / 4.0);
}

TEST_CASE("cac is clamped to [0,1] and guards the edges") {
  std::mt19937_64 rng(13);
  const std::size_t L = 200;
  std::vector<std::ptrdiff_t> index(L);
  std::uniform_int_distribution<std::ptrdiff_t> pick(0, static_cast<std::ptrdiff_t>(L) - 1);
  for (auto& j : index) j = pick(rng);
  const auto ac = arc_curve(index);
  const auto iac = iac_parabolic(L);
  const std::size_t guard = 16;
  const auto c = cac(ac, iac, guard);
  REQUIRE(c.values.size() == L);
  for (std::size_t i = 0; i < L; ++i) {
    CHECK(c.values[i] >= 0.0);
    CHECK(c.values[i] <= 1.0);
  }
  for (std::size_t i = 0; i < guard; ++i) {
    CHECK(c.values[i] == 1.0);
    CHECK(c.values[L - 1 - i] == 1.0);
  }
}

TEST_CASE("cac rejects mismatched lengths") {
  const auto ac = arc_curve({kNoNeighbor, kNoNeighbor, kNoNeighbor});
  const auto iac = iac_parabolic(4);
  CHECK_THROWS_AS(cac(ac, iac, 0), shape_error);
}

TEST_CASE("zero IAC positions do not divide by zero") {
  std::vector<std::ptrdiff_t> index(8, kNoNeighbor);
  index[1] = 6;
  const auto ac = arc_curve(index);
  Iac flat;
  flat.values.assign(8, 0.0);
  const auto c = cac(ac, flat, 0);
  for (double v : c.values) {
    CHECK(std::isfinite(v));
    CHECK(v <= 1.0);
  }
}
