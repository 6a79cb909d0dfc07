#include <catch2/catch_amalgamated.hpp>

#include "lsuss/eval.hpp"

using namespace lsuss;

namespace {

ChangePointSet cps(std::vector<std::size_t> v) {
  ChangePointSet c;
  c.indices = std::move(v);
  return c;
}

}  // namespace

TEST_CASE("score_regimes of a perfect prediction is zero") {
  const auto gt = cps({100, 400, 900});
  CHECK(score_regimes(gt, gt, 1000).value == 0.0);
}

TEST_CASE("score_regimes worked example") {
  // two ground-truth points, misses of 10 and 20 on a length-1000 series
  const auto gt = cps({300, 700});
  const auto pred = cps({310, 680});
  const auto r = score_regimes(pred, gt, 1000);
  CHECK(r.value == Catch::Approx((10.0 + 20.0) / (2.0 * 1000.0)));
  CHECK(r.value == Catch::Approx(0.015));
}

TEST_CASE("each ground-truth point pairs with its nearest prediction") {
  const auto gt = cps({100, 200});
  const auto pred = cps({105});
  const auto r = score_regimes(pred, gt, 1000);
  REQUIRE(r.pairing.size() == 2);
  CHECK(r.pairing[0].pred == 105);
  CHECK(r.pairing[0].abs_delta == 5.0);
  CHECK(r.pairing[1].pred == 105);
  CHECK(r.pairing[1].abs_delta == 95.0);
  CHECK(r.value == Catch::Approx(100.0 / 2000.0));
}

TEST_CASE("empty prediction pays the length penalty per point") {
  const auto gt = cps({100, 200});
  const auto r = score_regimes(cps({}), gt, 1000);
  CHECK(r.value == Catch::Approx(1.0));  // 2*1000 / (2*1000)
  for (const auto& p : r.pairing) CHECK_FALSE(p.pred.has_value());
}

TEST_CASE("score_regimes validates inputs") {
  CHECK_THROWS_AS(score_regimes(cps({1}), cps({}), 10), invalid_argument_error);
  CHECK_THROWS_AS(score_regimes(cps({1}), cps({1}), 0), invalid_argument_error);
}

TEST_CASE("literal prediction loss is zero whenever counts match") {
  // the printed formula multiplies MAE by |1 - Np/Ngt|, so equal counts force 0
  const auto gt = cps({100, 500});
  const auto pred = cps({180, 420});
  const auto r = prediction_loss_mae(pred, gt);
  CHECK(r.value == 0.0);
}

TEST_CASE("flagged prediction loss weights MAE instead of zeroing it") {
  const auto gt = cps({100, 500});
  const auto pred = cps({180, 420});
  const auto r = prediction_loss_mae(pred, gt, std::nullopt, true);
  CHECK(r.value == Catch::Approx(1.0 * 80.0));  // (1+0) * mean(80, 80)
  const auto r3 = prediction_loss_mae(cps({180, 420, 900}), gt, std::nullopt, true);
  CHECK(r3.value == Catch::Approx(1.5 * 80.0));
}

TEST_CASE("count mismatch activates the literal ratio weight") {
  const auto gt = cps({100, 500});
  const auto pred = cps({110});
  const auto r = prediction_loss_mae(pred, gt);
  // MAE = mean(10, 390) = 200, ratio term |1 - 1/2| = 0.5
  CHECK(r.value == Catch::Approx(100.0));
}

TEST_CASE("local window derives from mean ground-truth gaps") {
  std::vector<ChangePointSet> train{cps({100, 200, 400}), cps({50, 250})};
  // gaps: 100, 200, 200 -> mean 166.67 -> 167
  CHECK(local_window_from_train(train) == 167);
  CHECK_THROWS_AS(local_window_from_train({cps({5})}), invalid_argument_error);
}

TEST_CASE("grid enumeration covers the full cartesian product in order") {
  GridSpec spec;
  spec.nws = {50, 100};
  spec.scalers = {ScalerKind::none, ScalerKind::standard};
  spec.thresholds = {-1.0};
  const auto configs = spec.enumerate();
  REQUIRE(configs.size() == 4);
  CHECK(spec.cartesian_size() == 4);
  CHECK(configs[0].scaler == ScalerKind::none);
  CHECK(configs[0].nw == 50);
  CHECK(configs[1].nw == 100);
  CHECK(configs[2].scaler == ScalerKind::standard);
}

TEST_CASE("budget truncates enumeration deterministically") {
  GridSpec spec;
  spec.nws = {50, 100, 150};
  spec.budget = 2;
  const auto configs = spec.enumerate();
  REQUIRE(configs.size() == 2);
  CHECK(configs[0].nw == 50);
  CHECK(configs[1].nw == 100);
}

TEST_CASE("grid search ranks ascending with lexicographic tie-break") {
  GridSpec spec;
  spec.nws = {300, 100, 200};
  std::size_t calls = 0;
  const auto res = grid_search(spec, [&](const GridConfig& c) {
    ++calls;
    return c.nw == 200 ? 0.1 : 0.5;  // 300 and 100 tie
  });
  CHECK(res.runs_evaluated == 3);
  CHECK(calls == 3);
  REQUIRE(res.ranked.size() == 3);
  CHECK(res.ranked[0].config.nw == 200);
  // tie resolved by the config key string: "nw=100" < "nw=300"
  CHECK(res.ranked[1].config.nw == 100);
  CHECK(res.ranked[2].config.nw == 300);
}

TEST_CASE("empty grids are rejected") {
  GridSpec spec;
  spec.nws.clear();
  CHECK_THROWS_AS(spec.enumerate(), invalid_argument_error);
}
