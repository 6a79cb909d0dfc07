#ifndef LSUSS_COMMON_HPP
#define LSUSS_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lsuss {

// Error taxonomy shared across the library. Everything derives from
// lsuss::error so callers can catch the whole family at once.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct invalid_argument_error : error {
  using error::error;
};
struct invalid_window_error : error {
  using error::error;
};
struct shape_error : error {
  using error::error;
};
struct data_error : error {
  using error::error;
};
struct io_error : error {
  using error::error;
};
struct insufficient_data_error : error {
  using error::error;
};
struct oracle_cap_error : error {
  using error::error;
};
struct extraction_exhausted_error : error {
  using error::error;
};
struct invalid_config_error : error {
  using error::error;
};
struct invalid_index_error : error {
  using error::error;
};

constexpr double kDenomFloor = 1e-12;
constexpr std::ptrdiff_t kNoNeighbor = -1;

inline std::size_t& thread_budget() {
  static std::size_t n = 1;
  return n;
}

inline void set_thread_budget(std::size_t n) { thread_budget() = n == 0 ? 1 : n; }

// Splits [0, count) into contiguous chunks, one worker per chunk. Each index is
// handled by exactly one worker and workers never share output slots, so the
// result is identical for any thread budget.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t nt = std::min(thread_budget(), count == 0 ? std::size_t{1} : count);
  if (nt <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nt);
  const std::size_t chunk = (count + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    workers.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& w : workers) w.join();
}

}  // namespace lsuss

#endif
