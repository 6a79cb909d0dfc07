#ifndef LSUSS_EXTRACT_HPP
#define LSUSS_EXTRACT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lsuss/arc.hpp"
#include "lsuss/common.hpp"

namespace lsuss {

enum class ExtractorSource { rea, lrea, ltea, lfmd_maxima, ground_truth };

inline std::string to_string(ExtractorSource s) {
  switch (s) {
    case ExtractorSource::rea: return "REA";
    case ExtractorSource::lrea: return "LREA";
    case ExtractorSource::ltea: return "LTEA";
    case ExtractorSource::lfmd_maxima: return "LFMD-maxima";
    case ExtractorSource::ground_truth: return "ground-truth";
  }
  return "?";
}

struct ChangePointSet {
  std::vector<std::size_t> indices;  // strictly increasing
  ExtractorSource source = ExtractorSource::ground_truth;
  std::optional<std::size_t> k_requested;
};

enum class ScaleMode { centered, trailing };

struct RollingScaleParams {
  std::size_t local_window = 2;  // half-width on each side (centered mode)
  ScaleMode mode = ScaleMode::centered;
  double sigma_floor = 1e-12;

  void validate() const {
    if (local_window < 2) throw invalid_argument_error("local_window must be >= 2");
  }
};

namespace detail {

// Iteratively take the masked global argmin; mask radius around each pick.
// Ties break toward the smallest index.
inline std::vector<std::size_t> masked_argmins(std::vector<double> curve, std::size_t k,
                                               std::size_t radius) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> picks;
  for (std::size_t r = 0; r < k; ++r) {
    std::size_t best = curve.size();
    for (std::size_t i = 0; i < curve.size(); ++i)
      if (std::isfinite(curve[i]) && (best == curve.size() || curve[i] < curve[best])) best = i;
    if (best == curve.size())
      throw extraction_exhausted_error("fewer than k extractable valleys remain");
    picks.push_back(best);
    const std::size_t lo = best > radius ? best - radius : 0;
    const std::size_t hi = std::min(curve.size(), best + radius + 1);
    for (std::size_t i = lo; i < hi; ++i) curve[i] = inf;
  }
  std::sort(picks.begin(), picks.end());
  return picks;
}

}  // namespace detail

inline ChangePointSet rea(const Cac& cac_curve, std::size_t k, std::size_t nw) {
  if (k < 1) throw invalid_argument_error("k must be >= 1");
  ChangePointSet out;
  out.source = ExtractorSource::rea;
  out.k_requested = k;
  out.indices = detail::masked_argmins(cac_curve.values, k, 5 * nw);
  return out;
}

// Per-position standardization over a rolling window (population statistics,
// sigma floored). Centered mode uses [i-w, i+w]; trailing uses [i-2w, i].
inline std::vector<double> scale_cac(const std::vector<double>& values,
                                     const RollingScaleParams& params) {
  params.validate();
  const std::size_t L = values.size();
  const auto w = static_cast<std::ptrdiff_t>(params.local_window);
  std::vector<double> out(L);
  for (std::size_t i = 0; i < L; ++i) {
    const auto pi = static_cast<std::ptrdiff_t>(i);
    std::ptrdiff_t lo, hi;
    if (params.mode == ScaleMode::centered) {
      lo = pi - w;
      hi = pi + w;
    } else {
      lo = pi - 2 * w;
      hi = pi;
    }
    lo = std::max<std::ptrdiff_t>(lo, 0);
    hi = std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(L) - 1);
    double mean = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) mean += values[static_cast<std::size_t>(j)];
    const double cnt = static_cast<double>(hi - lo + 1);
    mean /= cnt;
    double var = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
      const double d = values[static_cast<std::size_t>(j)] - mean;
      var += d * d;
    }
    var /= cnt;
    out[i] = (values[i] - mean) / std::max(std::sqrt(var), params.sigma_floor);
  }
  return out;
}

inline std::vector<double> scale_cac(const Cac& c, const RollingScaleParams& params) {
  return scale_cac(c.values, params);
}

inline ChangePointSet lrea(const Cac& cac_curve, std::size_t k, std::size_t nw,
                           const RollingScaleParams& params) {
  if (k < 1) throw invalid_argument_error("k must be >= 1");
  ChangePointSet out;
  out.source = ExtractorSource::lrea;
  out.k_requested = k;
  out.indices = detail::masked_argmins(scale_cac(cac_curve.values, params), k, 5 * nw);
  return out;
}

// Threshold extraction: scale, keep runs of values <= threshold ("valleys"),
// emit each valley's argmin, then suppress valleys in depth order with the
// 5*nw exclusion radius.
inline ChangePointSet ltea(const std::vector<double>& values, const RollingScaleParams& params,
                           double threshold, std::size_t nw) {
  if (!std::isfinite(threshold))
    throw invalid_argument_error("LTEA threshold must be finite");
  const auto scaled = scale_cac(values, params);
  const std::size_t L = scaled.size();

  struct Valley {
    std::size_t argmin;
    double depth;
  };
  std::vector<Valley> valleys;
  std::size_t i = 0;
  while (i < L) {
    if (scaled[i] > threshold) {
      ++i;
      continue;
    }
    std::size_t best = i;
    std::size_t j = i;
    while (j < L && scaled[j] <= threshold) {
      if (scaled[j] < scaled[best]) best = j;
      ++j;
    }
    valleys.push_back({best, scaled[best]});
    i = j;
  }
  // deepest first; equal depth resolved toward the earlier valley
  std::stable_sort(valleys.begin(), valleys.end(),
                   [](const Valley& a, const Valley& b) { return a.depth < b.depth; });
  std::vector<std::size_t> kept;
  const auto radius = static_cast<std::ptrdiff_t>(5 * nw);
  for (const auto& v : valleys) {
    bool excluded = false;
    for (std::size_t p : kept)
      if (std::abs(static_cast<std::ptrdiff_t>(v.argmin) - static_cast<std::ptrdiff_t>(p)) <=
          radius) {
        excluded = true;
        break;
      }
    if (!excluded) kept.push_back(v.argmin);
  }
  std::sort(kept.begin(), kept.end());
  ChangePointSet out;
  out.source = ExtractorSource::ltea;
  out.indices = std::move(kept);
  return out;
}

inline ChangePointSet ltea(const Cac& c, const RollingScaleParams& params, double threshold,
                           std::size_t nw) {
  return ltea(c.values, params, threshold, nw);
}

struct LfmdExtractOptions {
  std::optional<std::size_t> k;  // set: REA/LREA path; unset: LTEA path
  bool local = false;            // use LREA instead of REA when k is set
  double threshold = -1.0;
  std::size_t step = 1;
  std::size_t m = 0;  // window length, for the midpoint mapping
};

// LFMD selects local maxima of the latent distance curve: negate and reuse the
// valley extractors, then map window indices back to sample positions at the
// segment midpoint.
inline ChangePointSet lfmd_extract(const std::vector<double>& distance_curve,
                                   const LfmdExtractOptions& opt, std::size_t nw,
                                   const RollingScaleParams& params) {
  std::vector<double> negated(distance_curve.size());
  for (std::size_t i = 0; i < distance_curve.size(); ++i) negated[i] = -distance_curve[i];
  Cac wrapped;
  wrapped.values = std::move(negated);
  ChangePointSet picks;
  if (opt.k) {
    picks = opt.local ? lrea(wrapped, *opt.k, nw, params) : rea(wrapped, *opt.k, nw);
  } else {
    picks = ltea(wrapped.values, params, opt.threshold, nw);
  }
  ChangePointSet out;
  out.source = ExtractorSource::lfmd_maxima;
  out.k_requested = opt.k;
  for (std::size_t w : picks.indices) out.indices.push_back(w * opt.step + opt.m / 2);
  return out;
}

}  // namespace lsuss

#endif
