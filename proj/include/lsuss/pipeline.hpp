#ifndef LSUSS_PIPELINE_HPP
#define LSUSS_PIPELINE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lsuss/arc.hpp"
#include "lsuss/autoenc.hpp"
#include "lsuss/common.hpp"
#include "lsuss/core.hpp"
#include "lsuss/eval.hpp"
#include "lsuss/extract.hpp"
#include "lsuss/io.hpp"
#include "lsuss/lsmp.hpp"
#include "lsuss/matprof.hpp"

namespace lsuss {

enum class Algorithm { fluss, floss, lfmd, lsuss, lsuss_online };

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::fluss: return "fluss";
    case Algorithm::floss: return "floss";
    case Algorithm::lfmd: return "lfmd";
    case Algorithm::lsuss: return "lsuss";
    case Algorithm::lsuss_online: return "lsuss_online";
  }
  return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "fluss") return Algorithm::fluss;
  if (s == "floss") return Algorithm::floss;
  if (s == "lfmd") return Algorithm::lfmd;
  if (s == "lsuss") return Algorithm::lsuss;
  if (s == "lsuss_online") return Algorithm::lsuss_online;
  throw invalid_config_error("unknown algorithm: " + s);
}

struct PipelineConfig {
  Algorithm algorithm = Algorithm::fluss;
  std::size_t nw = 100;
  std::optional<std::size_t> tc;
  std::size_t step = 1;  // lfmd only
  ScalerKind scaler = ScalerKind::none;
  std::optional<AeKind> arch;
  std::optional<std::size_t> k;  // set: REA/LREA; unset: LTEA
  bool local_extract = false;    // LREA instead of REA
  double threshold = -1.0;
  std::size_t local_window = 0;  // 0 -> default 5*nw
  std::optional<std::size_t> t_lim;
  std::size_t epsilon_batch = 1;
  std::size_t iac_trials = 200;
  std::uint64_t seed = 0;

  std::size_t effective_local_window() const {
    return local_window > 0 ? local_window : std::max<std::size_t>(2, 5 * nw);
  }

  void validate() const {
    if (nw < 2) throw invalid_config_error("nw must be >= 2");
    if (step < 1) throw invalid_config_error("step must be >= 1");
    if (epsilon_batch < 1) throw invalid_config_error("epsilon_batch must be >= 1");
    const bool needs_tc = algorithm == Algorithm::lsuss || algorithm == Algorithm::lsuss_online ||
                          algorithm == Algorithm::floss;
    if (needs_tc && !tc)
      throw invalid_config_error("tc is required for " + to_string(algorithm));
    if ((algorithm == Algorithm::lsuss || algorithm == Algorithm::lsuss_online ||
         algorithm == Algorithm::lfmd) &&
        arch && *arch == AeKind::convolutional && nw % 4 != 0)
      throw invalid_config_error("convolutional architecture requires nw divisible by 4");
  }
};

struct PipelineResult {
  Cac curve;  // CAC, or the (negated into valleys? no: raw) distance curve for lfmd
  ChangePointSet change_points;
};

namespace detail {

inline ChangePointSet extract_from_curve(const std::vector<double>& values,
                                         const PipelineConfig& cfg) {
  RollingScaleParams rp;
  rp.local_window = cfg.effective_local_window();
  rp.mode = cfg.algorithm == Algorithm::lsuss_online ? ScaleMode::trailing : ScaleMode::centered;
  Cac wrapped;
  wrapped.values = values;
  if (cfg.k) {
    return cfg.local_extract ? lrea(wrapped, *cfg.k, cfg.nw, rp) : rea(wrapped, *cfg.k, cfg.nw);
  }
  return ltea(values, rp, cfg.threshold, cfg.nw);
}

inline Iac pick_iac(std::size_t L, Direction dir, std::optional<std::size_t> tc,
                    std::size_t trials, std::uint64_t seed) {
  if (dir == Direction::bidirectional && !tc) return iac_parabolic(L);
  return iac_empirical(L, dir, tc, trials, seed);
}

inline TimeSeries maybe_scaled(const TimeSeries& ts, const PipelineConfig& cfg,
                               const std::optional<ScalerParams>& scaler) {
  if (scaler) return apply_scaler(*scaler, ts);
  if (cfg.scaler == ScalerKind::none) return ts;
  // no pre-fitted params supplied: fit on the input itself
  return apply_scaler(fit_scaler(cfg.scaler, ts), ts);
}

}  // namespace detail

// FLUSS / FLOSS: per-channel matrix profile and CAC, averaged across channels.
inline PipelineResult run_fluss_family(const TimeSeries& ts, const PipelineConfig& cfg,
                                       const std::optional<ScalerParams>& scaler = std::nullopt) {
  cfg.validate();
  ts.validate();
  if (ts.length() < 2 * cfg.nw)
    throw insufficient_data_error("series shorter than 2*nw; cannot build a matrix profile");
  const Direction dir =
      cfg.algorithm == Algorithm::floss ? Direction::forward_only : Direction::bidirectional;
  const TimeSeries scaled = detail::maybe_scaled(ts, cfg, scaler);
  const std::size_t L = ts.length() - cfg.nw + 1;
  const Iac iac_curve = detail::pick_iac(L, dir, cfg.tc, cfg.iac_trials, cfg.seed);

  std::vector<double> mean_cac(L, 0.0);
  for (std::size_t c = 0; c < scaled.channels(); ++c) {
    const ProfilePair pp = stamp(scaled.data[c], cfg.nw, cfg.tc, dir);
    const ArcCurve ac = arc_curve(pp.index, dir, cfg.tc);
    const Cac cc = cac(ac, iac_curve, cfg.nw);
    for (std::size_t i = 0; i < L; ++i) mean_cac[i] += cc.values[i];
  }
  for (double& v : mean_cac) v /= static_cast<double>(scaled.channels());

  PipelineResult res;
  res.curve.values = std::move(mean_cac);
  res.curve.direction = dir;
  res.curve.tc = cfg.tc;
  res.change_points = detail::extract_from_curve(res.curve.values, cfg);
  return res;
}

inline PipelineResult run_fluss(const TimeSeries& ts, const PipelineConfig& cfg,
                                const std::optional<ScalerParams>& scaler = std::nullopt) {
  if (cfg.algorithm != Algorithm::fluss) throw invalid_config_error("config is not fluss");
  return run_fluss_family(ts, cfg, scaler);
}

inline PipelineResult run_floss(const TimeSeries& ts, const PipelineConfig& cfg,
                                const std::optional<ScalerParams>& scaler = std::nullopt) {
  if (cfg.algorithm != Algorithm::floss) throw invalid_config_error("config is not floss");
  return run_fluss_family(ts, cfg, scaler);
}

// LFMD: encode windows at the configured step, distance between consecutive
// latents, local maxima as change-points.
inline PipelineResult run_lfmd(const TimeSeries& ts, const PipelineConfig& cfg,
                               const AeModel& model,
                               const std::optional<ScalerParams>& scaler = std::nullopt) {
  cfg.validate();
  ts.validate();
  if (ts.length() < cfg.nw + cfg.step)
    throw insufficient_data_error("series too short for two lfmd windows");
  const TimeSeries scaled = detail::maybe_scaled(ts, cfg, scaler);
  const SubsequenceSet subs = window_all(scaled, cfg.nw, cfg.step);
  std::vector<std::vector<double>> latents(subs.count());
  parallel_for(subs.count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto w = subs.window(i);
      std::vector<double> flat;
      flat.reserve(cfg.nw * w.size());
      for (const auto& ch : w) flat.insert(flat.end(), ch.begin(), ch.end());
      latents[i] = encode(model, flat);
    }
  });
  std::vector<double> curve(subs.count() - 1);
  for (std::size_t i = 0; i + 1 < subs.count(); ++i)
    curve[i] = lsuss::detail::euclidean(latents[i], latents[i + 1]);

  PipelineResult res;
  res.curve.values = curve;
  LfmdExtractOptions opt;
  opt.k = cfg.k;
  opt.local = cfg.local_extract;
  opt.threshold = cfg.threshold;
  opt.step = cfg.step;
  opt.m = cfg.nw;
  RollingScaleParams rp;
  rp.local_window = std::max<std::size_t>(2, cfg.effective_local_window() / std::max<std::size_t>(cfg.step, 1));
  res.change_points = lfmd_extract(curve, opt, std::max<std::size_t>(1, cfg.nw / cfg.step), rp);
  return res;
}

// LS-USS offline: latent matrix profile, temporally constrained CAC, extractor.
inline PipelineResult run_lsuss(const TimeSeries& ts, const PipelineConfig& cfg,
                                const AeModel& model,
                                const std::optional<ScalerParams>& scaler = std::nullopt) {
  cfg.validate();
  ts.validate();
  if (ts.length() < 2 * cfg.nw)
    throw insufficient_data_error("series shorter than 2*nw; cannot build a latent profile");
  const TimeSeries scaled = detail::maybe_scaled(ts, cfg, scaler);
  const SubsequenceSet subs = window_all(scaled, cfg.nw, 1);
  const LatentSet latents = encode_all(model, subs);
  const std::size_t excl = exclusion_radius(cfg.nw);
  const ProfilePair pp = cfg.t_lim
                             ? batched_collapse(latents, *cfg.t_lim, *cfg.tc, excl)
                             : collapse(latents, *cfg.tc, Direction::bidirectional, excl);
  const ArcCurve ac = arc_curve(pp.index, Direction::bidirectional, cfg.tc);
  const Iac iac_curve = detail::pick_iac(latents.count(), Direction::bidirectional, cfg.tc,
                                         cfg.iac_trials, cfg.seed);
  PipelineResult res;
  res.curve = cac(ac, iac_curve, cfg.nw);
  res.change_points = detail::extract_from_curve(res.curve.values, cfg);
  return res;
}

// ----- LS-USS online -----

// Streaming driver: raw samples in, finalized change-points out. Forward-only
// latent profile; a position's arc is fixed once tc newer windows exist; CAC
// values become final once every arc that can cross them is fixed; emissions
// wait a further local_window and are never retracted.
class OnlineLsuss {
 public:
  OnlineLsuss(const PipelineConfig& cfg, const AeModel& model,
              std::optional<ScalerParams> scaler = std::nullopt)
      : cfg_(cfg), model_(model), scaler_(std::move(scaler)) {
    cfg_.validate();
    if (cfg_.algorithm != Algorithm::lsuss_online)
      throw invalid_config_error("config is not lsuss_online");
    state_ = make_online_state(*cfg_.tc, cfg_.nw, exclusion_radius(cfg_.nw), cfg_.epsilon_batch);
    // reference forward IAC: left edge profile + interior plateau
    const std::size_t ref_len = std::max<std::size_t>(4 * *cfg_.tc, 64);
    ref_iac_ = iac_empirical(ref_len, Direction::forward_only, cfg_.tc, cfg_.iac_trials, cfg_.seed)
                   .values;
    buffer_.assign(model.arch.nc, {});
  }

  // Appends raw samples (one value per channel) and returns newly emitted
  // change-points, as window indices.
  std::vector<std::size_t> push(const std::vector<std::vector<double>>& columns) {
    if (columns.size() != buffer_.size()) throw shape_error("channel count mismatch");
    const std::size_t add = columns.empty() ? 0 : columns.front().size();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != add) throw shape_error("ragged sample batch");
      buffer_[c].insert(buffer_[c].end(), columns[c].begin(), columns[c].end());
    }
    encode_ready_windows();
    return drain_emissions();
  }

  // Flushes pending latents and performs a final emission pass.
  std::vector<std::size_t> finish() {
    online_flush(state_);
    sync_arcs();
    return drain_emissions(/*final_pass=*/true);
  }

  // CAC over count-final positions (test hook; matches the batch forward path).
  std::vector<double> final_cac() const { return cac_prefix_; }
  const LsmpState& state() const { return state_; }

 private:
  void encode_ready_windows() {
    const std::size_t n = buffer_.front().size();
    while (next_window_ + cfg_.nw <= n) {
      std::vector<double> flat;
      flat.reserve(cfg_.nw * buffer_.size());
      for (std::size_t c = 0; c < buffer_.size(); ++c) {
        for (std::size_t t = 0; t < cfg_.nw; ++t) {
          double v = buffer_[c][next_window_ + t];
          if (scaler_ && scaler_->kind != ScalerKind::none)
            v = (v - scaler_->per_channel[c].center) / scaler_->per_channel[c].scale;
          flat.push_back(v);
        }
      }
      online_feed(state_, encode(model_, flat));
      ++next_window_;
    }
    sync_arcs();
  }

  double iac_at(std::size_t k) const {
    const std::size_t mid = ref_iac_.size() / 2;
    return std::max(ref_iac_[std::min(k, mid)], kDenomFloor);
  }

  // Incorporate arcs of newly finalized positions into the running counts.
  void sync_arcs() {
    const std::size_t fin = state_.finalized_count();
    if (counts_.size() < state_.set.count()) counts_.resize(state_.set.count(), 0);
    for (; arcs_applied_ < fin; ++arcs_applied_) {
      const std::ptrdiff_t j = state_.index[arcs_applied_];
      if (j == kNoNeighbor) continue;
      for (std::size_t k = arcs_applied_ + 1; k < static_cast<std::size_t>(j); ++k) ++counts_[k];
    }
    // count-final positions: every arc that can cross them is already applied
    for (; cac_prefix_.size() < fin; ) {
      const std::size_t k = cac_prefix_.size();
      double v = 1.0;
      if (k >= cfg_.nw)  // left edge guard
        v = std::min(static_cast<double>(counts_[k]) / iac_at(k), 1.0);
      cac_prefix_.push_back(v);
    }
  }

  // Streaming threshold extraction over the count-final CAC prefix: trailing
  // scaling, closed valleys only, arrival-order exclusion.
  std::vector<std::size_t> drain_emissions(bool final_pass = false) {
    RollingScaleParams rp;
    rp.local_window = cfg_.effective_local_window();
    rp.mode = ScaleMode::trailing;
    const auto scaled = scale_cac(cac_prefix_, rp);
    const std::size_t horizon = *cfg_.tc + rp.local_window;
    const std::size_t newest = state_.set.count();
    std::vector<std::size_t> fresh;
    std::size_t i = 0;
    while (i < scaled.size()) {
      if (scaled[i] > cfg_.threshold) {
        ++i;
        continue;
      }
      std::size_t best = i, j = i;
      while (j < scaled.size() && scaled[j] <= cfg_.threshold) {
        if (scaled[j] < scaled[best]) best = j;
        ++j;
      }
      const bool closed = j < scaled.size() || final_pass;
      i = j;
      if (!closed) break;
      if (!final_pass && best + horizon > newest) continue;  // not yet emittable
      if (already_emitted_.count(best)) continue;
      bool excluded = false;
      for (std::size_t p : emitted_)
        if (std::llabs(static_cast<long long>(best) - static_cast<long long>(p)) <=
            static_cast<long long>(5 * cfg_.nw)) {
          excluded = true;
          break;
        }
      already_emitted_.insert(best);
      if (excluded) continue;
      emitted_.push_back(best);
      fresh.push_back(best);
    }
    return fresh;
  }

  PipelineConfig cfg_;
  const AeModel& model_;
  std::optional<ScalerParams> scaler_;
  LsmpState state_;
  std::vector<std::vector<double>> buffer_;
  std::size_t next_window_ = 0;
  std::vector<std::int64_t> counts_;
  std::size_t arcs_applied_ = 0;
  std::vector<double> cac_prefix_;
  std::vector<double> ref_iac_;
  std::vector<std::size_t> emitted_;
  std::set<std::size_t> already_emitted_;
};

inline PipelineResult run_lsuss_online(const TimeSeries& ts, const PipelineConfig& cfg,
                                       const AeModel& model,
                                       const std::optional<ScalerParams>& scaler = std::nullopt) {
  ts.validate();
  OnlineLsuss driver(cfg, model, scaler);
  std::vector<std::size_t> emitted;
  const std::size_t n = ts.length();
  const std::size_t chunk = cfg.epsilon_batch;
  for (std::size_t t = 0; t < n; t += chunk) {
    const std::size_t hi = std::min(n, t + chunk);
    std::vector<std::vector<double>> cols(ts.channels());
    for (std::size_t c = 0; c < ts.channels(); ++c)
      cols[c].assign(ts.data[c].begin() + static_cast<std::ptrdiff_t>(t),
                     ts.data[c].begin() + static_cast<std::ptrdiff_t>(hi));
    const auto fresh = driver.push(cols);
    emitted.insert(emitted.end(), fresh.begin(), fresh.end());
  }
  const auto fresh = driver.finish();
  emitted.insert(emitted.end(), fresh.begin(), fresh.end());
  std::sort(emitted.begin(), emitted.end());

  PipelineResult res;
  res.curve.values = driver.final_cac();
  res.curve.direction = Direction::forward_only;
  res.curve.tc = cfg.tc;
  res.change_points.indices = std::move(emitted);
  res.change_points.source = ExtractorSource::ltea;
  return res;
}

// Dispatch helper used by the CLI and the grid-search harness.
inline PipelineResult run_pipeline(const TimeSeries& ts, const PipelineConfig& cfg,
                                   const AeModel* model,
                                   const std::optional<ScalerParams>& scaler = std::nullopt) {
  switch (cfg.algorithm) {
    case Algorithm::fluss:
    case Algorithm::floss: return run_fluss_family(ts, cfg, scaler);
    case Algorithm::lfmd:
      if (!model) throw invalid_config_error("lfmd requires a model");
      return run_lfmd(ts, cfg, *model, scaler);
    case Algorithm::lsuss:
      if (!model) throw invalid_config_error("lsuss requires a model");
      return run_lsuss(ts, cfg, *model, scaler);
    case Algorithm::lsuss_online:
      if (!model) throw invalid_config_error("lsuss_online requires a model");
      return run_lsuss_online(ts, cfg, *model, scaler);
  }
  throw invalid_config_error("unknown algorithm");
}

// ----- grid search over pipelines -----

struct GridSearchContext {
  std::vector<const LabeledSeries*> train;
  std::vector<const LabeledSeries*> val;
  TrainConfig train_cfg;  // used when a grid cell needs an autoencoder
};

inline GridSearchResult grid_search_pipelines(Algorithm algorithm, const GridSpec& spec,
                                              const GridSearchContext& ctx) {
  if (ctx.val.empty()) throw invalid_argument_error("validation split is empty");
  const bool online = algorithm == Algorithm::lsuss_online;
  std::map<std::string, AeModel> model_cache;

  auto get_model = [&](const GridConfig& gc, const TimeSeries& sample) -> const AeModel* {
    if (!gc.arch) return nullptr;
    const std::string key = gc.key();
    auto it = model_cache.find(key);
    if (it == model_cache.end()) {
      AeModel model = make_model(build_arch(*gc.arch, sample.channels(), gc.nw), spec.seed);
      std::vector<std::vector<double>> windows;
      for (const auto* ls : ctx.train.empty() ? ctx.val : ctx.train) {
        TimeSeries scaled = gc.scaler == ScalerKind::none
                                ? ls->series
                                : apply_scaler(fit_scaler(gc.scaler, ls->series), ls->series);
        const auto subs = window_all(scaled, gc.nw, std::max<std::size_t>(gc.nw / 2, 1));
        for (std::size_t i = 0; i < subs.count(); ++i) {
          const auto w = subs.window(i);
          std::vector<double> flat;
          for (const auto& ch : w) flat.insert(flat.end(), ch.begin(), ch.end());
          windows.push_back(std::move(flat));
        }
      }
      train(model, windows, ctx.train_cfg);
      it = model_cache.emplace(key, std::move(model)).first;
    }
    return &it->second;
  };

  auto evaluate = [&](const GridConfig& gc) -> double {
    double acc = 0.0;
    for (const auto* ls : ctx.val) {
      PipelineConfig cfg;
      cfg.algorithm = algorithm;
      cfg.nw = gc.nw;
      cfg.tc = gc.tc;
      cfg.step = gc.step;
      cfg.scaler = gc.scaler;
      cfg.arch = gc.arch;
      cfg.threshold = gc.threshold;
      cfg.seed = spec.seed;
      if (!online && gc.extractor != "ltea") {
        cfg.k = ls->change_points.indices.size();
        cfg.local_extract = gc.extractor == "lrea";
      }
      const AeModel* model = get_model(gc, ls->series);
      const PipelineResult res = run_pipeline(ls->series, cfg, model);
      const std::size_t n = ls->series.length();
      acc += online ? prediction_loss_mae(res.change_points, ls->change_points, n).value
                    : score_regimes(res.change_points, ls->change_points, n).value;
    }
    return acc / static_cast<double>(ctx.val.size());
  };
  return grid_search(spec, evaluate);
}

}  // namespace lsuss

#endif
