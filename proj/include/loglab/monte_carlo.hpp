#ifndef LOGLAB_MONTE_CARLO_HPP
#define LOGLAB_MONTE_CARLO_HPP

/// \file
/// Stream-deterministic parallel sampling and mergeable accumulators.
///
/// Sample i always uses stream i. Streams are grouped into fixed-size chunks
/// that workers claim dynamically; every chunk is reduced into its own
/// accumulator and chunk accumulators are merged in ascending order. The
/// result is therefore bit-identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace loglab {

inline constexpr std::size_t kStreamChunk = 256;

/// Two-sided 99% normal quantile used by every statistical gate.
inline constexpr double kZ99 = 2.576;

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Evaluate fn(stream) for stream = 0 .. count-1 on `workers` threads and
/// return the results in stream order.
template <class Result, class Fn>
std::vector<Result> map_streams(std::uint64_t count, int workers, Fn&& fn) {
  std::vector<Result> out(count);
  const std::uint64_t chunks = (count + kStreamChunk - 1) / kStreamChunk;
  const auto threads = static_cast<std::uint64_t>(std::max(1, resolve_workers(workers)));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::uint64_t chunk = next.fetch_add(1);
      if (chunk >= chunks) return;
      const std::uint64_t end = std::min(count, (chunk + 1) * kStreamChunk);
      try {
        for (std::uint64_t s = chunk * kStreamChunk; s < end; ++s) out[s] = fn(s);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  const std::uint64_t spawn = std::min(threads, chunks);
  if (spawn <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(spawn);
    for (std::uint64_t t = 0; t < spawn; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Per-sample contribution to an estimator.
struct SampleValue {
  double value = 0.0;
  bool indicator = true;  ///< the cutoff event held
  bool capped = false;    ///< the cap L was active
  bool overflow = false;  ///< the weight is not representable
};

/// Running sums; merge is plain addition of sums.
struct Accumulator {
  std::uint64_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::uint64_t indicator_hits = 0;
  std::uint64_t cap_hits = 0;
  std::uint64_t overflows = 0;

  void add(const SampleValue& s) {
    ++n;
    sum += s.value;
    sumsq += s.value * s.value;
    min = std::min(min, s.value);
    max = std::max(max, s.value);
    indicator_hits += s.indicator ? 1 : 0;
    cap_hits += s.capped ? 1 : 0;
    overflows += s.overflow ? 1 : 0;
  }

  Accumulator& merge(const Accumulator& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
    min = std::min(min, o.min);
    max = std::max(max, o.max);
    indicator_hits += o.indicator_hits;
    cap_hits += o.cap_hits;
    overflows += o.overflows;
    return *this;
  }

  friend Accumulator merged(Accumulator a, const Accumulator& b) { return a.merge(b); }
};

/// Finalized Monte Carlo estimate.
struct EstimateRecord {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;
  double min = 0.0;
  double max = 0.0;
  double indicator_hit_rate = 0.0;
  double cap_hit_rate = 0.0;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }
  double ci_low(double z = kZ99) const { return mean - z * standard_error; }
  double ci_high(double z = kZ99) const { return mean + z * standard_error; }
};

inline EstimateRecord finalize(const Accumulator& acc) {
  EstimateRecord r;
  r.n = acc.n;
  r.sum = acc.sum;
  r.sumsq = acc.sumsq;
  r.min = acc.n ? acc.min : 0.0;
  r.max = acc.n ? acc.max : 0.0;
  if (acc.n == 0) return r;
  const double n = static_cast<double>(acc.n);
  r.mean = acc.sum / n;
  if (acc.n > 1) {
    const double spread = acc.sumsq / n - r.mean * r.mean;
    r.standard_error = std::sqrt(std::max(0.0, spread) / (n - 1.0));
  }
  r.indicator_hit_rate = static_cast<double>(acc.indicator_hits) / n;
  r.cap_hit_rate = static_cast<double>(acc.cap_hits) / n;
  if (acc.overflows > 0 || !std::isfinite(acc.sum) || !std::isfinite(acc.sumsq)) r.flags.emplace_back("overflow");
  return r;
}

/// Chunked, order-fixed reduction of per-stream samples.
inline Accumulator accumulate(std::span<const SampleValue> samples) {
  Accumulator total;
  for (std::size_t begin = 0; begin < samples.size(); begin += kStreamChunk) {
    Accumulator chunk;
    const std::size_t end = std::min(samples.size(), begin + kStreamChunk);
    for (std::size_t i = begin; i < end; ++i) chunk.add(samples[i]);
    total.merge(chunk);
  }
  return total;
}

/// True when the largest 1% of the (non-negative) weights carry more than
/// half of their total.
inline bool heavy_tailed(std::span<const SampleValue> samples) {
  if (samples.empty()) return false;
  std::vector<double> w;
  w.reserve(samples.size());
  for (const auto& s : samples) w.push_back(std::abs(s.value));
  const std::size_t top = std::max<std::size_t>(1, (w.size() + 99) / 100);
  std::nth_element(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(top - 1), w.end(), std::greater<>());
  const double head = std::accumulate(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(top), 0.0);
  const double total = head + std::accumulate(w.begin() + static_cast<std::ptrdiff_t>(top), w.end(), 0.0);
  return total > 0.0 && head > 0.5 * total;
}

/// Reduce samples into a record; heavy-tailed weights are flagged "unreliable".
inline EstimateRecord summarize(std::span<const SampleValue> samples, bool check_tail) {
  EstimateRecord r = finalize(accumulate(samples));
  if (check_tail && samples.size() >= 100 && heavy_tailed(samples)) r.flags.emplace_back("unreliable");
  return r;
}

/// Mean and standard error of a plain sequence of values (stream order).
inline EstimateRecord summarize_values(std::span<const double> values) {
  Accumulator acc;
  for (double v : values) acc.add({v, true, false, false});
  return finalize(acc);
}

}  // namespace loglab

#endif  // LOGLAB_MONTE_CARLO_HPP
