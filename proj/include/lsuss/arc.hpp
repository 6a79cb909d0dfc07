#ifndef LSUSS_ARC_HPP
#define LSUSS_ARC_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

#include "lsuss/common.hpp"
#include "lsuss/matprof.hpp"

namespace lsuss {

struct ArcCurve {
  std::vector<std::int64_t> counts;
  Direction direction = Direction::bidirectional;
  std::optional<std::size_t> tc;
};

enum class IacKind { parabolic, empirical };

struct Iac {
  std::vector<double> values;
  IacKind kind = IacKind::parabolic;
  Direction direction = Direction::bidirectional;
  std::optional<std::size_t> tc;
  std::size_t n_trials = 0;
};

struct Cac {
  std::vector<double> values;
  Direction direction = Direction::bidirectional;
  std::optional<std::size_t> tc;
};

namespace detail {

// Adds the strict-interior crossings of arc (i, j) to a difference array.
inline void add_arc(std::vector<std::int64_t>& diff, std::ptrdiff_t i, std::ptrdiff_t j) {
  const std::ptrdiff_t lo = std::min(i, j), hi = std::max(i, j);
  if (hi - lo < 2) return;  // no strict interior
  diff[static_cast<std::size_t>(lo) + 1] += 1;
  diff[static_cast<std::size_t>(hi)] -= 1;
}

}  // namespace detail

inline ArcCurve arc_curve(const std::vector<std::ptrdiff_t>& index,
                          Direction direction = Direction::bidirectional,
                          std::optional<std::size_t> tc = std::nullopt) {
  const std::size_t L = index.size();
  std::vector<std::int64_t> diff(L + 1, 0);
  for (std::size_t i = 0; i < L; ++i) {
    const std::ptrdiff_t j = index[i];
    if (j == kNoNeighbor) continue;
    if (j < 0 || j >= static_cast<std::ptrdiff_t>(L))
      throw invalid_index_error("nearest-neighbor index out of range");
    detail::add_arc(diff, static_cast<std::ptrdiff_t>(i), j);
  }
  ArcCurve ac;
  ac.direction = direction;
  ac.tc = tc;
  ac.counts.resize(L);
  std::int64_t run = 0;
  for (std::size_t k = 0; k < L; ++k) {
    run += diff[k];
    ac.counts[k] = run;
  }
  return ac;
}

inline Iac iac_parabolic(std::size_t L) {
  if (L < 3) throw invalid_argument_error("parabolic IAC requires L >= 3");
  Iac iac;
  iac.kind = IacKind::parabolic;
  iac.values.resize(L);
  const double dL = static_cast<double>(L);
  for (std::size_t i = 0; i < L; ++i) {
    const double di = static_cast<double>(i);
    iac.values[i] = 2.0 * di * (dL - di) / dL;
  }
  return iac;
}

// Monte Carlo idealized arc curve: every position points to a uniformly random
// admissible neighbor (direction/tc respected), crossings are averaged over
// trials. Deterministic for a fixed seed; results cached per parameter tuple.
inline Iac iac_empirical(std::size_t L, Direction direction, std::optional<std::size_t> tc,
                         std::size_t n_trials = 200, std::uint64_t seed = 0) {
  if (n_trials < 1) throw invalid_argument_error("need at least one trial");
  using Key = std::tuple<std::size_t, int, std::int64_t, std::size_t, std::uint64_t>;
  static std::map<Key, Iac> cache;
  static std::mutex cache_mu;
  const Key key{L, direction == Direction::forward_only ? 1 : 0,
                tc ? static_cast<std::int64_t>(*tc) : -1, n_trials, seed};
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  std::vector<std::int64_t> total(L + 1, 0);
  std::mt19937_64 rng(seed);
  for (std::size_t trial = 0; trial < n_trials; ++trial) {
    std::vector<std::int64_t> diff(L + 1, 0);
    for (std::size_t i = 0; i < L; ++i) {
      std::ptrdiff_t lo = 0, hi = static_cast<std::ptrdiff_t>(L) - 1;
      const auto pi = static_cast<std::ptrdiff_t>(i);
      if (tc) {
        lo = std::max<std::ptrdiff_t>(lo, pi - static_cast<std::ptrdiff_t>(*tc));
        hi = std::min<std::ptrdiff_t>(hi, pi + static_cast<std::ptrdiff_t>(*tc));
      }
      if (direction == Direction::forward_only) lo = std::max(lo, pi + 1);
      if (lo > hi) continue;  // no admissible target, no arc
      std::uniform_int_distribution<std::ptrdiff_t> pick(lo, hi);
      std::ptrdiff_t j = pick(rng);
      if (j == pi) {  // self is not an arc; redraw once against the remaining range
        j = (j == hi) ? j - 1 : j + 1;
        if (j < lo || j > hi) continue;
      }
      detail::add_arc(diff, pi, j);
    }
    std::int64_t run = 0;
    for (std::size_t k = 0; k < L; ++k) {
      run += diff[k];
      total[k] += run;
    }
  }

  Iac iac;
  iac.kind = IacKind::empirical;
  iac.direction = direction;
  iac.tc = tc;
  iac.n_trials = n_trials;
  iac.values.resize(L);
  for (std::size_t k = 0; k < L; ++k)
    iac.values[k] = static_cast<double>(total[k]) / static_cast<double>(n_trials);
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    cache.emplace(key, iac);
  }
  return iac;
}

inline Cac cac(const ArcCurve& ac, const Iac& iac, std::size_t edge_guard) {
  if (ac.counts.size() != iac.values.size()) throw shape_error("AC and IAC length mismatch");
  const std::size_t L = ac.counts.size();
  Cac out;
  out.direction = ac.direction;
  out.tc = ac.tc;
  out.values.assign(L, 1.0);
  const std::size_t lo = std::min(edge_guard, L);
  const std::size_t hi = L > edge_guard ? L - edge_guard : 0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double denom = std::max(iac.values[i], kDenomFloor);
    out.values[i] = std::min(static_cast<double>(ac.counts[i]) / denom, 1.0);
  }
  return out;
}

}  // namespace lsuss

#endif
