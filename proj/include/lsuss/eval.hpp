#ifndef LSUSS_EVAL_HPP
#define LSUSS_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lsuss/autoenc.hpp"
#include "lsuss/common.hpp"
#include "lsuss/core.hpp"
#include "lsuss/extract.hpp"

namespace lsuss {

enum class Metric { score_regimes, prediction_loss_mae };

struct EvalResult {
  Metric metric = Metric::score_regimes;
  double value = 0.0;
  std::size_t n = 0;
  std::size_t n_gt = 0;
  std::size_t n_pred = 0;
  struct Pair {
    std::size_t gt;
    std::optional<std::size_t> pred;
    double abs_delta;
  };
  std::vector<Pair> pairing;
};

namespace detail {

// Each ground-truth point pairs with its nearest prediction; an empty
// prediction set pays the penalty distance n per point.
inline std::vector<EvalResult::Pair> nearest_pairing(const ChangePointSet& pred,
                                                     const ChangePointSet& gt, std::size_t n) {
  std::vector<EvalResult::Pair> pairs;
  pairs.reserve(gt.indices.size());
  for (std::size_t g : gt.indices) {
    if (pred.indices.empty()) {
      pairs.push_back({g, std::nullopt, static_cast<double>(n)});
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_p = 0;
    for (std::size_t p : pred.indices) {
      const double d = std::abs(static_cast<double>(p) - static_cast<double>(g));
      if (d < best) {
        best = d;
        best_p = p;
      }
    }
    pairs.push_back({g, best_p, best});
  }
  return pairs;
}

}  // namespace detail

inline EvalResult score_regimes(const ChangePointSet& pred, const ChangePointSet& gt,
                                std::size_t n) {
  if (gt.indices.empty()) throw invalid_argument_error("ground truth must be non-empty");
  if (n < 1) throw invalid_argument_error("series length must be >= 1");
  EvalResult r;
  r.metric = Metric::score_regimes;
  r.n = n;
  r.n_gt = gt.indices.size();
  r.n_pred = pred.indices.size();
  r.pairing = detail::nearest_pairing(pred, gt, n);
  double sum = 0.0;
  for (const auto& p : r.pairing) sum += p.abs_delta;
  r.value = sum / (static_cast<double>(r.n_gt) * static_cast<double>(n));
  return r;
}

// Literal formula |1 - N_pred/N_GT| * MAE; the flagged variant uses
// (1 + |1 - N_pred/N_GT|) * MAE instead.
inline EvalResult prediction_loss_mae(const ChangePointSet& pred, const ChangePointSet& gt,
                                      std::optional<std::size_t> n = std::nullopt,
                                      bool additive_weight = false) {
  if (gt.indices.empty()) throw invalid_argument_error("ground truth must be non-empty");
  if (pred.indices.empty() && !n)
    throw invalid_argument_error("empty prediction needs a series length for the penalty");
  EvalResult r;
  r.metric = Metric::prediction_loss_mae;
  r.n = n.value_or(0);
  r.n_gt = gt.indices.size();
  r.n_pred = pred.indices.size();
  r.pairing = detail::nearest_pairing(pred, gt, n.value_or(0));
  double mae = 0.0;
  for (const auto& p : r.pairing) mae += p.abs_delta;
  mae /= static_cast<double>(r.n_gt);
  const double ratio_term =
      std::abs(1.0 - static_cast<double>(r.n_pred) / static_cast<double>(r.n_gt));
  r.value = additive_weight ? (1.0 + ratio_term) * mae : ratio_term * mae;
  return r;
}

inline std::size_t local_window_from_train(const std::vector<ChangePointSet>& train_gt) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& gt : train_gt)
    for (std::size_t i = 1; i < gt.indices.size(); ++i) {
      sum += static_cast<double>(gt.indices[i] - gt.indices[i - 1]);
      ++count;
    }
  if (count == 0) throw invalid_argument_error("no inter-change-point gaps in training data");
  return static_cast<std::size_t>(std::llround(sum / static_cast<double>(count)));
}

// ----- grid search -----

struct GridConfig {
  ScalerKind scaler = ScalerKind::none;
  std::size_t nw = 0;
  std::optional<std::size_t> tc;
  std::size_t step = 1;
  std::optional<AeKind> arch;
  std::string extractor = "rea";  // rea | lrea | ltea
  double threshold = -1.0;

  // lexicographic ordering key, also used for deterministic tie-breaking
  std::string key() const {
    std::ostringstream os;
    os << "arch=" << (arch ? (*arch == AeKind::fully_connected ? "fc" : "conv") : "-")
       << ",extractor=" << extractor << ",nw=" << nw << ",scaler=" << to_string(scaler)
       << ",step=" << step << ",tc=" << (tc ? std::to_string(*tc) : "-")
       << ",threshold=" << threshold;
    return os.str();
  }
};

struct GridSpec {
  std::vector<ScalerKind> scalers{ScalerKind::none};
  std::vector<std::size_t> nws{100};
  std::vector<std::optional<std::size_t>> tcs{std::nullopt};
  std::vector<std::size_t> steps{1};
  std::vector<std::optional<AeKind>> archs{std::nullopt};
  std::vector<std::string> extractors{"rea"};
  std::vector<double> thresholds{-1.0};
  std::optional<std::size_t> budget;
  std::uint64_t seed = 0;

  std::size_t cartesian_size() const {
    return scalers.size() * nws.size() * tcs.size() * steps.size() * archs.size() *
           extractors.size() * thresholds.size();
  }

  std::vector<GridConfig> enumerate() const {
    if (cartesian_size() < 1) throw invalid_argument_error("empty grid");
    std::vector<GridConfig> out;
    for (auto sc : scalers)
      for (auto nw : nws)
        for (const auto& tc : tcs)
          for (auto step : steps)
            for (const auto& arch : archs)
              for (const auto& ex : extractors)
                for (double th : thresholds) {
                  GridConfig c;
                  c.scaler = sc;
                  c.nw = nw;
                  c.tc = tc;
                  c.step = step;
                  c.arch = arch;
                  c.extractor = ex;
                  c.threshold = th;
                  out.push_back(c);
                  if (budget && out.size() >= *budget) return out;
                }
    return out;
  }
};

struct GridSearchEntry {
  GridConfig config;
  double metric = 0.0;
};

struct GridSearchResult {
  std::vector<GridSearchEntry> ranked;  // ascending metric, ties lexicographic
  std::size_t runs_evaluated = 0;
};

// Evaluates every grid cell through the supplied callback and ranks ascending.
// The callback owns all pipeline/model mechanics.
inline GridSearchResult grid_search(const GridSpec& spec,
                                    const std::function<double(const GridConfig&)>& evaluate) {
  auto configs = spec.enumerate();
  GridSearchResult res;
  res.ranked.reserve(configs.size());
  for (const auto& c : configs) {
    res.ranked.push_back({c, evaluate(c)});
    ++res.runs_evaluated;
  }
  std::stable_sort(res.ranked.begin(), res.ranked.end(),
                   [](const GridSearchEntry& a, const GridSearchEntry& b) {
                     if (a.metric != b.metric) return a.metric < b.metric;
                     return a.config.key() < b.config.key();
                   });
  return res;
}

}  // namespace lsuss

#endif
