#ifndef LSUSS_MATPROF_HPP
#define LSUSS_MATPROF_HPP

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <mutex>
#include <optional>
#include <vector>

#include "lsuss/common.hpp"

namespace lsuss {

enum class Direction { bidirectional, forward_only };

struct DistanceProfile {
  std::vector<double> values;
  std::ptrdiff_t query_index = kNoNeighbor;  // kNoNeighbor marks an external query
};

struct ProfilePair {
  std::vector<double> profile;
  std::vector<std::ptrdiff_t> index;
  std::size_t m = 0;
  std::optional<std::size_t> tc;
  Direction direction = Direction::bidirectional;
};

inline std::size_t exclusion_radius(std::size_t m) { return (m + 3) / 4; }  // ceil(m/4)

namespace detail {

inline std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

inline std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Rolling mean / population std over all length-m windows, via cumulative sums.
struct WindowMoments {
  std::vector<double> mean, stddev;
  std::vector<bool> constant;  // max == min, detected exactly

  WindowMoments(const std::vector<double>& x, std::size_t m) {
    const std::size_t L = x.size() - m + 1;
    mean.resize(L);
    stddev.resize(L);
    constant.resize(L);
    std::vector<double> cum(x.size() + 1, 0.0), cum2(x.size() + 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      cum[i + 1] = cum[i] + x[i];
      cum2[i + 1] = cum2[i] + x[i] * x[i];
    }
    const double dm = static_cast<double>(m);
    for (std::size_t j = 0; j < L; ++j) {
      const double mu = (cum[j + m] - cum[j]) / dm;
      const double var = std::max((cum2[j + m] - cum2[j]) / dm - mu * mu, 0.0);
      mean[j] = mu;
      stddev[j] = std::sqrt(var);
    }
    // exact constancy via monotonic deques (rolling max == rolling min)
    std::deque<std::size_t> qmax, qmin;
    for (std::size_t i = 0; i < x.size(); ++i) {
      while (!qmax.empty() && x[qmax.back()] <= x[i]) qmax.pop_back();
      qmax.push_back(i);
      while (!qmin.empty() && x[qmin.back()] >= x[i]) qmin.pop_back();
      qmin.push_back(i);
      if (i + 1 >= m) {
        const std::size_t j = i + 1 - m;
        if (qmax.front() < j) qmax.pop_front();
        if (qmin.front() < j) qmin.pop_front();
        constant[j] = x[qmax.front()] == x[qmin.front()];
      }
    }
  }
};

// FFT-based sliding dot product against a fixed series. The series spectrum is
// computed once; each query costs two FFTs of the padded length.
class SlidingDotProduct {
 public:
  SlidingDotProduct(const std::vector<double>& series, std::size_t m)
      : n_(series.size()), m_(m), fft_len_(next_pow2(series.size() + m)) {
    const std::size_t spec_len = fft_len_ / 2 + 1;
    buf_ = fftw_alloc_real(fft_len_);
    spec_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(spec_len));
    series_spec_.resize(spec_len);
    {
      std::lock_guard<std::mutex> lock(fftw_mutex());
      fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(fft_len_), buf_,
                                  reinterpret_cast<fftw_complex*>(spec_), FFTW_ESTIMATE);
      inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(fft_len_),
                                  reinterpret_cast<fftw_complex*>(spec_), buf_, FFTW_ESTIMATE);
    }
    std::fill(buf_, buf_ + fft_len_, 0.0);
    std::copy(series.begin(), series.end(), buf_);
    fftw_execute(fwd_);
    std::copy(spec_, spec_ + spec_len, series_spec_.begin());
  }

  SlidingDotProduct(const SlidingDotProduct&) = delete;
  SlidingDotProduct& operator=(const SlidingDotProduct&) = delete;

  ~SlidingDotProduct() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(buf_);
    fftw_free(spec_);
  }

  // dot[j] = sum_u query[u] * series[j+u], for j in [0, n-m]
  std::vector<double> compute(const std::vector<double>& query) {
    std::fill(buf_, buf_ + fft_len_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) buf_[i] = query[m_ - 1 - i];
    fftw_execute(fwd_);
    const std::size_t spec_len = fft_len_ / 2 + 1;
    for (std::size_t i = 0; i < spec_len; ++i) spec_[i] *= series_spec_[i];
    fftw_execute(inv_);
    std::vector<double> dot(n_ - m_ + 1);
    const double norm = 1.0 / static_cast<double>(fft_len_);
    for (std::size_t j = 0; j < dot.size(); ++j) dot[j] = buf_[j + m_ - 1] * norm;
    return dot;
  }

 private:
  std::size_t n_, m_, fft_len_;
  double* buf_;
  std::complex<double>* spec_;
  std::vector<std::complex<double>> series_spec_;
  fftw_plan fwd_, inv_;
};

inline double znorm_distance_from_dot(double dot, double mu_q, double sig_q, bool const_q,
                                      double mu_j, double sig_j, bool const_j, std::size_t m) {
  // Degenerate-sigma convention: constant vs constant -> 0, constant vs
  // non-constant -> sqrt(m).
  if (const_q && const_j) return 0.0;
  if (const_q || const_j) return std::sqrt(static_cast<double>(m));
  const double dm = static_cast<double>(m);
  const double corr = (dot - dm * mu_q * mu_j) / (dm * std::max(sig_q, kDenomFloor) *
                                                  std::max(sig_j, kDenomFloor));
  return std::sqrt(std::max(2.0 * dm * (1.0 - corr), 0.0));
}

inline bool admissible(std::ptrdiff_t i, std::ptrdiff_t j, std::size_t excl,
                       const std::optional<std::size_t>& tc, Direction dir) {
  const auto d = std::abs(j - i);
  if (d < static_cast<std::ptrdiff_t>(excl)) return false;
  if (tc && d > static_cast<std::ptrdiff_t>(*tc)) return false;
  if (dir == Direction::forward_only && j <= i) return false;
  return true;
}

}  // namespace detail

inline DistanceProfile mass_distance_profile(const std::vector<double>& query,
                                             const std::vector<double>& series) {
  const std::size_t m = query.size(), n = series.size();
  if (m < 2) throw invalid_window_error("z-normalization requires m >= 2");
  if (m > n) throw invalid_window_error("query longer than series");
  detail::SlidingDotProduct sdp(series, m);
  detail::WindowMoments mom(series, m);

  double mu_q = 0.0;
  for (double v : query) mu_q += v;
  mu_q /= static_cast<double>(m);
  double var_q = 0.0;
  for (double v : query) var_q += (v - mu_q) * (v - mu_q);
  var_q /= static_cast<double>(m);
  const double sig_q = std::sqrt(var_q);
  const auto [qmin, qmax] = std::minmax_element(query.begin(), query.end());
  const bool const_q = *qmin == *qmax;

  const auto dot = sdp.compute(query);
  DistanceProfile dp;
  dp.values.resize(dot.size());
  for (std::size_t j = 0; j < dot.size(); ++j)
    dp.values[j] = detail::znorm_distance_from_dot(dot[j], mu_q, sig_q, const_q, mom.mean[j],
                                                   mom.stddev[j], mom.constant[j],
                                                   static_cast<std::size_t>(m));
  return dp;
}

inline ProfilePair stamp(const std::vector<double>& series, std::size_t m,
                         std::optional<std::size_t> tc = std::nullopt,
                         Direction direction = Direction::bidirectional) {
  const std::size_t n = series.size();
  if (m < 2) throw invalid_window_error("z-normalization requires m >= 2");
  if (n < 2 * m) throw invalid_window_error("stamp requires n >= 2m");
  const std::size_t L = n - m + 1;
  const std::size_t excl = exclusion_radius(m);
  constexpr double inf = std::numeric_limits<double>::infinity();

  ProfilePair out;
  out.profile.assign(L, inf);
  out.index.assign(L, kNoNeighbor);
  out.m = m;
  out.tc = tc;
  out.direction = direction;

  detail::WindowMoments mom(series, m);
  parallel_for(L, [&](std::size_t lo, std::size_t hi) {
    detail::SlidingDotProduct sdp(series, m);
    std::vector<double> query(m);
    for (std::size_t i = lo; i < hi; ++i) {
      std::copy_n(series.begin() + static_cast<std::ptrdiff_t>(i), m, query.begin());
      const auto dot = sdp.compute(query);
      double best = inf;
      std::ptrdiff_t best_j = kNoNeighbor;
      for (std::size_t j = 0; j < L; ++j) {
        if (!detail::admissible(static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j),
                                excl, tc, direction))
          continue;
        const double d = detail::znorm_distance_from_dot(
            dot[j], mom.mean[i], mom.stddev[i], mom.constant[i], mom.mean[j], mom.stddev[j],
            mom.constant[j], m);
        if (d < best) {
          best = d;
          best_j = static_cast<std::ptrdiff_t>(j);
        }
      }
      out.profile[i] = best;
      out.index[i] = best_j;
    }
  });
  return out;
}

// O(n^2 m) oracle: explicit z-normalization of every window, direct Euclidean
// distance. Deliberately avoids the dot-product identity used by MASS.
inline ProfilePair brute_force_mp(const std::vector<double>& series, std::size_t m,
                                  std::optional<std::size_t> tc = std::nullopt,
                                  Direction direction = Direction::bidirectional,
                                  std::size_t oracle_cap = 4096) {
  const std::size_t n = series.size();
  if (n > oracle_cap) throw oracle_cap_error("series exceeds the brute-force oracle cap");
  if (m < 2) throw invalid_window_error("z-normalization requires m >= 2");
  if (n < 2 * m) throw invalid_window_error("requires n >= 2m");
  const std::size_t L = n - m + 1;
  const std::size_t excl = exclusion_radius(m);
  constexpr double inf = std::numeric_limits<double>::infinity();

  // z-normalize all windows up front
  std::vector<std::vector<double>> z(L);
  std::vector<bool> constant(L);
  for (std::size_t i = 0; i < L; ++i) {
    z[i].assign(series.begin() + static_cast<std::ptrdiff_t>(i),
                series.begin() + static_cast<std::ptrdiff_t>(i + m));
    const auto [lo, hi] = std::minmax_element(z[i].begin(), z[i].end());
    constant[i] = *lo == *hi;
    double mu = 0.0;
    for (double v : z[i]) mu += v;
    mu /= static_cast<double>(m);
    double var = 0.0;
    for (double v : z[i]) var += (v - mu) * (v - mu);
    var /= static_cast<double>(m);
    const double sig = constant[i] ? 1.0 : std::sqrt(var);
    for (double& v : z[i]) v = (v - mu) / sig;
  }

  ProfilePair out;
  out.profile.assign(L, inf);
  out.index.assign(L, kNoNeighbor);
  out.m = m;
  out.tc = tc;
  out.direction = direction;
  for (std::size_t i = 0; i < L; ++i) {
    double best = inf;
    std::ptrdiff_t best_j = kNoNeighbor;
    for (std::size_t j = 0; j < L; ++j) {
      if (!detail::admissible(static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j),
                              excl, tc, direction))
        continue;
      double d;
      if (constant[i] && constant[j]) {
        d = 0.0;
      } else if (constant[i] || constant[j]) {
        d = std::sqrt(static_cast<double>(m));
      } else {
        double acc = 0.0;
        for (std::size_t u = 0; u < m; ++u) {
          const double diff = z[i][u] - z[j][u];
          acc += diff * diff;
        }
        d = std::sqrt(acc);
      }
      if (d < best) {
        best = d;
        best_j = static_cast<std::ptrdiff_t>(j);
      }
    }
    out.profile[i] = best;
    out.index[i] = best_j;
  }
  return out;
}

}  // namespace lsuss

#endif
