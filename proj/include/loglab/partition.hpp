#ifndef LOGLAB_PARTITION_HPP
#define LOGLAB_PARTITION_HPP

/// \file
/// Monte Carlo estimation of truncated focusing partition functions
///   Z_N = E_mu[ 1{|int :(pi_N u)^2:| <= K} exp(p min(lambda R_N(u), L)) ]
/// under the Gaussian base measure, plus the statistical suites that probe the
/// free field (absence of atoms, L^2 Cauchy property, hypercontractivity).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/errors.hpp"
#include "loglab/monte_carlo.hpp"
#include "loglab/spectral_field.hpp"
#include "loglab/wick.hpp"

namespace loglab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct MCConfig {
  int d = 2;
  int N = 8;
  double lambda = 0.0;
  double K = kInfinity;  ///< renormalized L^2 cutoff; +inf disables it
  double L = kInfinity;  ///< cap on lambda R_N
  double p = 1.0;        ///< moment order of the density
  std::uint64_t nsamples = 1000;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const {
    detail::check_dimension(d);
    if (N < 0) throw std::invalid_argument("MCConfig: N must be >= 0");
    if (nsamples < 2) throw std::invalid_argument("MCConfig: nsamples must be >= 2");
    if (!(p >= 1.0)) throw std::invalid_argument("MCConfig: p must be >= 1");
    if (!(K > 0.0)) throw std::invalid_argument("MCConfig: K must be positive (or inf)");
    if (std::isnan(lambda) || std::isnan(L)) throw std::invalid_argument("MCConfig: lambda and L must be numbers");
  }
};

/// |int :(pi_N u)^2: dx| <= K; always true for K = +inf.
inline bool event_indicator(const SpectralField& field, const WickVariance& sigma, double K) {
  if (std::isinf(K) && K > 0) return true;
  return std::abs(renormalized_mass(field, sigma)) <= K;
}

/// lambda R_N(u) for one sample; zero coupling skips the grid entirely.
inline double coupled_interaction(const SpectralField& field, const WickVariance& sigma, double lambda) {
  if (lambda == 0.0) return 0.0;
  return lambda * interaction_rn(to_grid(field), sigma);
}

namespace detail {

inline constexpr double kMaxExponent = 709.0;

/// exp(p min(x, L)), flagging non-representable weights instead of clamping.
inline SampleValue capped_weight(double lambda_r, double L, double p) {
  SampleValue s;
  s.capped = lambda_r > L;
  const double arg = p * std::min(lambda_r, L);
  if (arg > kMaxExponent) {
    s.overflow = true;
    s.value = std::numeric_limits<double>::infinity();
  } else {
    s.value = std::exp(arg);
  }
  return s;
}

inline void throw_on_overflow(const EstimateRecord& r, const char* what, double L) {
  if (r.has_flag("overflow"))
    throw EstimationError(std::string(what) + ": exponential weight overflowed double precision (cap L=" +
                          std::to_string(L) + "); lower the cap L");
}

}  // namespace detail

/// Per-sample weight 1{event} exp(p min(lambda R_N, L)).
inline SampleValue partition_sample(const SpectralField& field, const WickVariance& sigma, const MCConfig& cfg) {
  if (!event_indicator(field, sigma, cfg.K)) return {0.0, false, false, false};
  SampleValue s = detail::capped_weight(coupled_interaction(field, sigma, cfg.lambda), cfg.L, cfg.p);
  s.indicator = true;
  return s;
}

/// Monte Carlo estimate of E[1{event} exp(p min(lambda R_N, L))]. p = 1 gives
/// Z_N; larger p gives the L^p(mu) moment of the unnormalized density.
inline EstimateRecord estimate_Z(const MCConfig& cfg) {
  cfg.validate();
  const auto lattice = build_lattice(cfg.d, cfg.N);
  const auto sig = sigma(cfg.d, cfg.N);
  const auto samples = map_streams<SampleValue>(cfg.nsamples, cfg.workers, [&](std::uint64_t stream) {
    return partition_sample(sample_field(lattice, cfg.seed, stream), sig, cfg);
  });
  auto record = summarize(samples, true);
  detail::throw_on_overflow(record, "estimate_Z", cfg.L);
  return record;
}

/// Per-sample min(lambda R_N, L) 1{event}: the capped functional without the exponential.
inline SampleValue capped_interaction_sample(const SpectralField& field, const WickVariance& sigma, const MCConfig& cfg) {
  if (!event_indicator(field, sigma, cfg.K)) return {0.0, false, false, false};
  const double lr = coupled_interaction(field, sigma, cfg.lambda);
  return {std::min(lr, cfg.L), true, lr > cfg.L, false};
}

/// E[min(lambda R_N, L) 1{event}].
inline EstimateRecord estimate_capped_interaction(const MCConfig& cfg) {
  cfg.validate();
  const auto lattice = build_lattice(cfg.d, cfg.N);
  const auto sig = sigma(cfg.d, cfg.N);
  const auto samples = map_streams<SampleValue>(cfg.nsamples, cfg.workers, [&](std::uint64_t stream) {
    return capped_interaction_sample(sample_field(lattice, cfg.seed, stream), sig, cfg);
  });
  return summarize(samples, false);
}

/// E[exp(min(lambda R_N, L) 1{event})], the functional whose logarithm the
/// variational formula represents (the indicator sits inside the exponential).
inline EstimateRecord estimate_capped_exponential(const MCConfig& cfg) {
  cfg.validate();
  const auto lattice = build_lattice(cfg.d, cfg.N);
  const auto sig = sigma(cfg.d, cfg.N);
  const auto samples = map_streams<SampleValue>(cfg.nsamples, cfg.workers, [&](std::uint64_t stream) {
    const auto field = sample_field(lattice, cfg.seed, stream);
    if (!event_indicator(field, sig, cfg.K)) return SampleValue{1.0, false, false, false};
    SampleValue s = detail::capped_weight(coupled_interaction(field, sig, cfg.lambda), cfg.L, cfg.p);
    return s;
  });
  auto record = summarize(samples, true);
  detail::throw_on_overflow(record, "estimate_capped_exponential", cfg.L);
  return record;
}

/// Diagnostic E|w_N(u) - w_M(u)|^p with w_K(u) = 1{event} exp(min(lambda R_K(u), L))
/// evaluated on one draw at cutoff N and its truncation to M. Not a gate.
inline EstimateRecord estimate_density_gap(const MCConfig& cfg, int M) {
  cfg.validate();
  if (M < 0 || M > cfg.N) throw std::invalid_argument("estimate_density_gap: need 0 <= M <= N");
  const auto lattice = build_lattice(cfg.d, cfg.N);
  const auto lower = build_lattice(cfg.d, M);
  const auto sig = sigma(cfg.d, cfg.N);
  const auto sig_m = sigma(cfg.d, M);
  MCConfig unit = cfg;
  unit.p = 1.0;
  const auto samples = map_streams<SampleValue>(cfg.nsamples, cfg.workers, [&](std::uint64_t stream) {
    const auto field = sample_field(lattice, cfg.seed, stream);
    const auto wn = partition_sample(field, sig, unit);
    const auto wm = partition_sample(with_cutoff(field, lower), sig_m, unit);
    SampleValue s;
    s.overflow = wn.overflow || wm.overflow;
    s.capped = wn.capped || wm.capped;
    s.value = s.overflow ? std::numeric_limits<double>::infinity() : std::pow(std::abs(wn.value - wm.value), cfg.p);
    return s;
  });
  auto record = summarize(samples, true);
  detail::throw_on_overflow(record, "estimate_density_gap", cfg.L);
  return record;
}

/// fn(sample) for every stream, in stream order.
template <class Fn>
std::vector<double> sample_functional(int d, int N, std::uint64_t nsamples, std::uint64_t seed, int workers, Fn&& fn) {
  const auto lattice = build_lattice(d, N);
  return map_streams<double>(nsamples, workers,
                             [&](std::uint64_t stream) { return fn(sample_field(lattice, seed, stream)); });
}

struct AtomCheck {
  double probe = 0.0;
  double max_jump = 0.0;   ///< largest empirical CDF jump near the probe
  std::uint64_t nsamples = 0;
  std::size_t distinct = 0;  ///< number of distinct sampled values overall
  double bound() const { return 10.0 / static_cast<double>(nsamples); }
  bool passed() const { return max_jump <= bound(); }
};

/// Empirical check that int :u_N^2: dx has no atom near K: sort the sampled
/// values and report the largest multiplicity among values whose rank lies
/// within 1% of the probe's rank.
inline AtomCheck atom_check(int d, int N, double K, std::uint64_t nsamples, std::uint64_t seed, int workers = 1) {
  if (nsamples < 10000) throw std::invalid_argument("atom_check: needs at least 10^4 samples");
  const auto sig = sigma(d, N);
  auto sorted = sample_functional(d, N, nsamples, seed, workers,
                                  [&](const SpectralField& f) { return renormalized_mass(f, sig); });
  std::sort(sorted.begin(), sorted.end());
  AtomCheck out;
  out.probe = K;
  out.nsamples = nsamples;
  std::vector<double> distinct(sorted);
  out.distinct = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
  const auto rank = static_cast<std::ptrdiff_t>(std::lower_bound(sorted.begin(), sorted.end(), K) - sorted.begin());
  const auto reach = std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(nsamples / 100));
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, rank - reach);
  const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(sorted.size()), rank + reach);
  std::size_t longest = 0;
  for (std::ptrdiff_t i = lo; i < hi;) {
    std::ptrdiff_t j = i;
    while (j < static_cast<std::ptrdiff_t>(sorted.size()) && sorted[static_cast<std::size_t>(j)] == sorted[static_cast<std::size_t>(i)]) ++j;
    longest = std::max(longest, static_cast<std::size_t>(j - i));
    i = j;
  }
  out.max_jump = static_cast<double>(longest) / static_cast<double>(nsamples);
  return out;
}

struct CauchyRow {
  int M = 0;
  int N = 0;
  double analytic = 0.0;  ///< E[(R_N - R_M)^2] from the lattice sum
  EstimateRecord mc;      ///< Monte Carlo estimate on coupled samples
  bool within(double z = 3.0) const { return std::abs(mc.mean - analytic) <= z * mc.standard_error; }
};

struct CauchyTable {
  std::vector<CauchyRow> consecutive;  ///< (Ns[i], Ns[i+1])
  std::vector<CauchyRow> to_top;       ///< (M, max Ns) for every M in Ns
  bool analytic_decreasing = true;     ///< to_top analytic values positive and strictly decreasing in M, 0 at the top
  bool all_within = true;
  bool passed() const { return analytic_decreasing && all_within; }
};

/// Compare exact E[(R_N - R_M)^2] with Monte Carlo estimates, both for
/// consecutive cutoffs and against the largest cutoff. All cutoffs share each
/// sample (the draw at the largest cutoff, truncated). Only the distance to the
/// largest cutoff is required to decrease in M; increments between consecutive
/// cutoffs need not be monotone at small N.
inline CauchyTable cauchy_suite(int d, const std::vector<int>& Ns, std::uint64_t nsamples, std::uint64_t seed,
                                int workers = 1, std::size_t budget = kDefaultOracleBudget) {
  if (Ns.size() < 2) throw std::invalid_argument("cauchy_suite: needs at least two cutoffs");
  for (std::size_t i = 1; i < Ns.size(); ++i)
    if (Ns[i] <= Ns[i - 1]) throw std::invalid_argument("cauchy_suite: cutoffs must increase");
  std::vector<double> second(Ns.size());
  for (std::size_t i = 0; i < Ns.size(); ++i) second[i] = interaction_cross_moment(d, Ns[i], Ns[i], budget);

  std::vector<LatticePtr> lattices;
  std::vector<WickVariance> sigmas;
  for (int N : Ns) {
    lattices.push_back(build_lattice(d, N));
    sigmas.push_back(sigma(d, N));
  }
  const auto& top = lattices.back();
  const auto per_stream = map_streams<std::vector<double>>(nsamples, workers, [&](std::uint64_t stream) {
    const auto field = sample_field(top, seed, stream);
    std::vector<double> r(Ns.size());
    for (std::size_t i = 0; i < Ns.size(); ++i) r[i] = interaction_rn(to_grid(with_cutoff(field, lattices[i])), sigmas[i]);
    return r;
  });

  auto make_row = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> diff2(nsamples);
    for (std::size_t s = 0; s < nsamples; ++s) {
      const double delta = per_stream[s][hi] - per_stream[s][lo];
      diff2[s] = delta * delta;
    }
    return CauchyRow{Ns[lo], Ns[hi], second[hi] - second[lo], summarize_values(diff2)};
  };

  CauchyTable table;
  const std::size_t last = Ns.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    table.consecutive.push_back(make_row(i, i + 1));
    table.all_within = table.all_within && table.consecutive.back().within();
  }
  for (std::size_t i = 0; i <= last; ++i) {
    auto row = make_row(i, last);
    if (i < last) {
      table.all_within = table.all_within && row.within();
      if (!(row.analytic > 0.0)) table.analytic_decreasing = false;
    } else if (row.analytic != 0.0) {
      table.analytic_decreasing = false;
    }
    if (!table.to_top.empty() && !(row.analytic < table.to_top.back().analytic)) table.analytic_decreasing = false;
    table.to_top.push_back(std::move(row));
  }
  return table;
}

struct HypercontractivityCheck {
  double ratio = 0.0;           ///< ||X||_4 / ||X||_2
  double ratio_stderr = 0.0;    ///< batch-means standard error of the ratio
  double bound = 3.0;           ///< (p-1)^{k/2} for p = 4, k = 2
  bool passed() const { return ratio <= bound + kZ99 * ratio_stderr; }
};

/// Moment ratio of the degree-2 chaos X = int :u_N^2: dx.
inline HypercontractivityCheck hypercontractivity_check(int d, int N, std::uint64_t nsamples, std::uint64_t seed,
                                                        int workers = 1, int batches = 50) {
  const auto sig = sigma(d, N);
  const auto x = sample_functional(d, N, nsamples, seed, workers,
                                   [&](const SpectralField& f) { return renormalized_mass(f, sig); });
  auto ratio_of = [](auto begin, auto end) {
    double m2 = 0.0, m4 = 0.0;
    double count = 0.0;
    for (auto it = begin; it != end; ++it) {
      const double v2 = *it * *it;
      m2 += v2;
      m4 += v2 * v2;
      count += 1.0;
    }
    return std::pow(m4 / count, 0.25) / std::sqrt(m2 / count);
  };
  HypercontractivityCheck out;
  out.ratio = ratio_of(x.begin(), x.end());
  const std::size_t per = x.size() / static_cast<std::size_t>(batches);
  std::vector<double> batch_ratios;
  for (int b = 0; b < batches && per > 0; ++b) {
    auto begin = x.begin() + static_cast<std::ptrdiff_t>(b * per);
    batch_ratios.push_back(ratio_of(begin, begin + static_cast<std::ptrdiff_t>(per)));
  }
  const auto rec = summarize_values(batch_ratios);
  out.ratio_stderr = rec.standard_error;
  return out;
}

}  // namespace loglab

#endif  // LOGLAB_PARTITION_HPP
