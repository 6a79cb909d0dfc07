#ifndef LSUSS_LSMP_HPP
#define LSUSS_LSMP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "lsuss/autoenc.hpp"
#include "lsuss/common.hpp"
#include "lsuss/core.hpp"
#include "lsuss/matprof.hpp"

namespace lsuss {

struct LatentSet {
  std::vector<std::vector<double>> vectors;
  std::size_t m = 0;              // upstream window length (samples)
  std::size_t source_length = 0;  // n of the originating series

  std::size_t count() const { return vectors.size(); }
  std::size_t dim() const { return vectors.empty() ? 0 : vectors.front().size(); }
};

inline LatentSet encode_all(const AeModel& model, const SubsequenceSet& subs) {
  if (subs.step != 1) throw invalid_argument_error("encode_all requires step 1");
  LatentSet set;
  set.m = subs.m;
  set.source_length = subs.source->length();
  set.vectors.resize(subs.count());
  parallel_for(subs.count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const auto w = subs.window(i);
      std::vector<double> flat;
      flat.reserve(subs.m * w.size());
      for (const auto& ch : w) flat.insert(flat.end(), ch.begin(), ch.end());
      set.vectors[i] = encode(model, flat);
    }
  });
  return set;
}

namespace detail {

inline double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace detail

// Plain (non-z-normalized) Euclidean distances from query to vectors [lo, hi).
inline DistanceProfile latent_distance_profile(const std::vector<double>& query,
                                               const LatentSet& set, std::size_t lo,
                                               std::size_t hi) {
  if (lo > hi || hi > set.count()) throw invalid_argument_error("bad latent range");
  DistanceProfile dp;
  dp.values.resize(hi - lo);
  for (std::size_t j = lo; j < hi; ++j)
    dp.values[j - lo] = detail::euclidean(query, set.vectors[j]);
  return dp;
}

namespace detail {

// Nearest admissible neighbor for position i against [range_lo, range_hi).
inline void lsmp_row(const LatentSet& set, std::size_t i, std::size_t range_lo,
                     std::size_t range_hi, std::size_t tc, std::size_t exclusion, Direction dir,
                     double& best, std::ptrdiff_t& best_j) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  best = inf;
  best_j = kNoNeighbor;
  const auto pi = static_cast<std::ptrdiff_t>(i);
  std::ptrdiff_t lo = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(range_lo),
                                               pi - static_cast<std::ptrdiff_t>(tc));
  std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(range_hi),
                                               pi + static_cast<std::ptrdiff_t>(tc) + 1);
  if (dir == Direction::forward_only) lo = std::max(lo, pi + 1);
  for (std::ptrdiff_t j = lo; j < hi; ++j) {
    if (std::abs(j - pi) < static_cast<std::ptrdiff_t>(exclusion)) continue;
    const double d = euclidean(set.vectors[i], set.vectors[static_cast<std::size_t>(j)]);
    if (d < best) {
      best = d;
      best_j = j;
    }
  }
}

}  // namespace detail

inline ProfilePair collapse(const LatentSet& set, std::size_t tc,
                            Direction direction = Direction::bidirectional,
                            std::size_t exclusion = 1) {
  const std::size_t L = set.count();
  if (L < 2 * exclusion + 2) throw invalid_argument_error("latent set too small for collapse");
  ProfilePair out;
  out.m = set.m;
  out.tc = tc;
  out.direction = direction;
  out.profile.resize(L);
  out.index.resize(L);
  parallel_for(L, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      detail::lsmp_row(set, i, 0, L, tc, exclusion, direction, out.profile[i], out.index[i]);
  });
  return out;
}

struct BatchedCollapseStats {
  std::size_t peak_distance_entries = 0;
  std::size_t batches = 0;
};

// Memory-bounded collapse: overlapping batches of t_lim positions, the last
// 2*tc-1 positions of each batch are recomputed by the next one, merged by
// element-wise minimum. Exactly equal to collapse() over the full set.
inline ProfilePair batched_collapse(const LatentSet& set, std::size_t t_lim, std::size_t tc,
                                    std::size_t exclusion = 1,
                                    BatchedCollapseStats* stats = nullptr) {
  if (t_lim <= 2 * tc) throw invalid_config_error("batched collapse requires t_lim > 2*tc");
  const std::size_t L = set.count();
  if (L < 2 * exclusion + 2) throw invalid_argument_error("latent set too small for collapse");
  constexpr double inf = std::numeric_limits<double>::infinity();
  ProfilePair out;
  out.m = set.m;
  out.tc = tc;
  out.direction = Direction::bidirectional;
  out.profile.assign(L, inf);
  out.index.assign(L, kNoNeighbor);

  const std::size_t overlap = 2 * tc - 1;
  std::size_t batch_lo = 0, batch_hi = std::min(t_lim, L);
  BatchedCollapseStats local;
  while (true) {
    ++local.batches;
    // one row of distances at a time: at most 2*tc+1 resident entries
    local.peak_distance_entries = std::max(local.peak_distance_entries, 2 * tc + 1);
    for (std::size_t i = batch_lo; i < batch_hi; ++i) {
      double best;
      std::ptrdiff_t best_j;
      detail::lsmp_row(set, i, batch_lo, batch_hi, tc, exclusion, Direction::bidirectional, best,
                       best_j);
      // merge: strict improvement, or equal value at a smaller index
      if (best < out.profile[i] ||
          (best == out.profile[i] && best_j != kNoNeighbor &&
           (out.index[i] == kNoNeighbor || best_j < out.index[i]))) {
        out.profile[i] = best;
        out.index[i] = best_j;
      }
    }
    if (batch_hi >= L) break;
    batch_lo = batch_hi - overlap;
    batch_hi = std::min(batch_hi + t_lim, L);
  }
  if (stats) *stats = local;
  return out;
}

// Streaming forward-only LSMP. Positions become immutable ("finalized") once tc
// newer vectors exist; provisional entries are readable but flagged.
struct LsmpState {
  LatentSet set;  // all vectors seen so far
  std::vector<double> profile;
  std::vector<std::ptrdiff_t> index;
  std::size_t tc = 0;
  std::size_t exclusion = 1;
  std::size_t batch_len = 1;  // epsilon-real-time accumulation size
  std::vector<std::vector<double>> pending;

  std::size_t finalized_count() const {
    const std::size_t n = set.count();
    return n > tc ? n - tc : 0;
  }
};

inline LsmpState make_online_state(std::size_t tc, std::size_t m, std::size_t exclusion = 1,
                                   std::size_t batch_len = 1) {
  if (batch_len < 1) throw invalid_config_error("batch_len must be >= 1");
  LsmpState st;
  st.tc = tc;
  st.exclusion = exclusion;
  st.batch_len = batch_len;
  st.set.m = m;
  return st;
}

namespace detail {

inline void online_append_one(LsmpState& st, std::vector<double> vec) {
  st.set.vectors.push_back(std::move(vec));
  const std::size_t t = st.set.count() - 1;
  constexpr double inf = std::numeric_limits<double>::infinity();
  st.profile.push_back(inf);
  st.index.push_back(kNoNeighbor);
  // the new vector can only serve as a forward neighbor of older positions
  const auto pt = static_cast<std::ptrdiff_t>(t);
  const std::ptrdiff_t lo =
      std::max<std::ptrdiff_t>(0, pt - static_cast<std::ptrdiff_t>(st.tc));
  const std::ptrdiff_t hi = pt - static_cast<std::ptrdiff_t>(st.exclusion);
  for (std::ptrdiff_t i = lo; i <= hi; ++i) {
    const double d = euclidean(st.set.vectors[static_cast<std::size_t>(i)], st.set.vectors[t]);
    if (d < st.profile[static_cast<std::size_t>(i)]) {  // ties keep the older neighbor
      st.profile[static_cast<std::size_t>(i)] = d;
      st.index[static_cast<std::size_t>(i)] = pt;
    }
  }
}

}  // namespace detail

inline void online_update(LsmpState& st, const std::vector<std::vector<double>>& new_vectors) {
  for (const auto& v : new_vectors) detail::online_append_one(st, v);
}

// Epsilon-real-time entry point: vectors accumulate in `pending` and are only
// appended once batch_len of them exist. flush forces the remainder through.
inline void online_feed(LsmpState& st, std::vector<double> vec) {
  st.pending.push_back(std::move(vec));
  if (st.pending.size() >= st.batch_len) {
    online_update(st, st.pending);
    st.pending.clear();
  }
}

inline void online_flush(LsmpState& st) {
  if (!st.pending.empty()) {
    online_update(st, st.pending);
    st.pending.clear();
  }
}

inline ProfilePair online_snapshot(const LsmpState& st, bool include_provisional = false) {
  ProfilePair out;
  out.m = st.set.m;
  out.tc = st.tc;
  out.direction = Direction::forward_only;
  const std::size_t n = include_provisional ? st.set.count() : st.finalized_count();
  out.profile.assign(st.profile.begin(), st.profile.begin() + static_cast<std::ptrdiff_t>(n));
  out.index.assign(st.index.begin(), st.index.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

}  // namespace lsuss

#endif
