#ifndef LSUSS_CORE_HPP
#define LSUSS_CORE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lsuss/common.hpp"

namespace lsuss {

/// Channel-major multichannel series. data[c][t] is sample t of channel c.
struct TimeSeries {
  std::vector<std::vector<double>> data;
  std::optional<double> sample_rate_hz;
  std::vector<std::string> channel_names;

  std::size_t channels() const { return data.size(); }
  std::size_t length() const { return data.empty() ? 0 : data.front().size(); }

  void validate() const {
    if (data.empty() || data.front().empty())
      throw data_error("time series must have at least one channel and one sample");
    const std::size_t n = data.front().size();
    for (std::size_t c = 0; c < data.size(); ++c) {
      if (data[c].size() != n) throw shape_error("all channels must share the same length");
      for (double v : data[c])
        if (!std::isfinite(v)) throw data_error("non-finite sample in channel " + std::to_string(c));
    }
    if (sample_rate_hz && *sample_rate_hz <= 0.0)
      throw invalid_argument_error("sample rate must be positive");
  }
};

/// One NC x m view into the source series, starting at a given sample.
struct SubsequenceSet {
  const TimeSeries* source = nullptr;
  std::size_t m = 0;
  std::size_t step = 1;
  std::vector<std::size_t> starts;

  std::size_t count() const { return starts.size(); }

  // Materializes window i as an NC x m block (channel-major).
  std::vector<std::vector<double>> window(std::size_t i) const {
    const std::size_t s = starts.at(i);
    std::vector<std::vector<double>> w(source->channels(), std::vector<double>(m));
    for (std::size_t c = 0; c < source->channels(); ++c)
      std::copy_n(source->data[c].begin() + static_cast<std::ptrdiff_t>(s), m, w[c].begin());
    return w;
  }
};

inline SubsequenceSet window_all(const TimeSeries& ts, std::size_t m, std::size_t step = 1) {
  const std::size_t n = ts.length();
  if (m < 1 || m > n) throw invalid_window_error("window length must satisfy 1 <= m <= n");
  if (step < 1) throw invalid_argument_error("step must be >= 1");
  SubsequenceSet set;
  set.source = &ts;
  set.m = m;
  set.step = step;
  const std::size_t k = (n - m) / step + 1;
  set.starts.resize(k);
  for (std::size_t i = 0; i < k; ++i) set.starts[i] = i * step;
  return set;
}

enum class ScalerKind { none, standard, minmax, robust };

inline std::string to_string(ScalerKind k) {
  switch (k) {
    case ScalerKind::none: return "none";
    case ScalerKind::standard: return "standard";
    case ScalerKind::minmax: return "minmax";
    case ScalerKind::robust: return "robust";
  }
  return "?";
}

inline ScalerKind scaler_kind_from_string(const std::string& s) {
  if (s == "none") return ScalerKind::none;
  if (s == "standard") return ScalerKind::standard;
  if (s == "minmax") return ScalerKind::minmax;
  if (s == "robust") return ScalerKind::robust;
  throw invalid_argument_error("unknown scaler kind: " + s);
}

struct ScalerParams {
  struct ChannelStats {
    // center/scale generalize over the three parametrizations:
    //   standard -> mean / std, minmax -> min / (max-min), robust -> median / IQR
    double center = 0.0;
    double scale = 1.0;
  };
  ScalerKind kind = ScalerKind::none;
  std::vector<ChannelStats> per_channel;
  std::string fitted_on;
};

namespace detail {

// Percentile with linear interpolation on the sorted sample, q in [0,100].
inline double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v.front();
  const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace detail

inline ScalerParams fit_scaler(ScalerKind kind, const TimeSeries& train,
                               const std::string& dataset_id = "") {
  train.validate();
  ScalerParams p;
  p.kind = kind;
  p.fitted_on = dataset_id;
  p.per_channel.resize(train.channels());
  for (std::size_t c = 0; c < train.channels(); ++c) {
    const auto& x = train.data[c];
    auto& st = p.per_channel[c];
    switch (kind) {
      case ScalerKind::none:
        break;
      case ScalerKind::standard: {
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        double var = 0.0;
        for (double v : x) var += (v - mean) * (v - mean);
        var /= static_cast<double>(x.size());  // population variance
        st.center = mean;
        st.scale = std::max(std::sqrt(var), kDenomFloor);
        break;
      }
      case ScalerKind::minmax: {
        const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        st.center = *lo;
        st.scale = std::max(*hi - *lo, kDenomFloor);
        break;
      }
      case ScalerKind::robust: {
        st.center = detail::percentile(x, 50.0);
        const double iqr = detail::percentile(x, 75.0) - detail::percentile(x, 25.0);
        st.scale = std::max(iqr, kDenomFloor);
        break;
      }
    }
  }
  return p;
}

inline TimeSeries apply_scaler(const ScalerParams& params, const TimeSeries& ts) {
  if (params.kind == ScalerKind::none) return ts;
  if (params.per_channel.size() != ts.channels())
    throw shape_error("scaler channel count does not match series");
  TimeSeries out = ts;
  for (std::size_t c = 0; c < ts.channels(); ++c) {
    const auto& st = params.per_channel[c];
    for (double& v : out.data[c]) v = (v - st.center) / st.scale;
  }
  return out;
}

inline TimeSeries inverse_apply_scaler(const ScalerParams& params, const TimeSeries& ts) {
  if (params.kind == ScalerKind::none) return ts;
  if (params.per_channel.size() != ts.channels())
    throw shape_error("scaler channel count does not match series");
  TimeSeries out = ts;
  for (std::size_t c = 0; c < ts.channels(); ++c) {
    const auto& st = params.per_channel[c];
    for (double& v : out.data[c]) v = v * st.scale + st.center;
  }
  return out;
}

}  // namespace lsuss

#endif
