#ifndef LOGLAB_FFT_HPP
#define LOGLAB_FFT_HPP

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace loglab::fft {

enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {

// FFTW planning is not thread-safe; execution on distinct arrays is. Plans are
// created once per (rank, size, direction) under a lock and shared read-only.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int rank, int size, Direction dir) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rank, size, static_cast<int>(dir));
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int i = 0; i < rank; ++i) total *= static_cast<std::size_t>(size);
    std::vector<std::complex<double>> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    std::vector<int> dims(static_cast<std::size_t>(rank), size);
    fftw_plan plan = fftw_plan_dft(rank, dims.data(), buf, buf, static_cast<int>(dir),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("fftw_plan_dft failed");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

}  // namespace detail

/// Unnormalized in-place DFT of a rank-dimensional cube of side `size`.
/// backward computes sum_k a_k e^{+i k.x}; forward uses e^{-i k.x}.
inline void transform(std::span<std::complex<double>> data, int rank, int size, Direction dir) {
  std::size_t total = 1;
  for (int i = 0; i < rank; ++i) total *= static_cast<std::size_t>(size);
  if (data.size() != total) throw std::invalid_argument("fft::transform: buffer size mismatch");
  fftw_plan plan = detail::PlanCache::instance().get(rank, size, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace loglab::fft

#endif  // LOGLAB_FFT_HPP
