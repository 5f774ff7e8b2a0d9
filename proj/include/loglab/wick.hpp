#ifndef LOGLAB_WICK_HPP
#define LOGLAB_WICK_HPP

/// \file
/// Wick calculus for the truncated log-correlated field: Hermite polynomials
/// with a variance parameter, Wick-ordered quadratic and quartic integrals,
/// the shifted interaction, and closed-form Wiener chaos second moments.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/errors.hpp"
#include "loglab/spectral_field.hpp"

namespace loglab {

/// H_k(x; sigma) for k <= 4.
inline double hermite(int k, double x, double sigma) {
  switch (k) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return x * x - sigma;
    case 3: return x * x * x - 3.0 * sigma * x;
    case 4: {
      const double x2 = x * x;
      return x2 * x2 - 6.0 * sigma * x2 + 3.0 * sigma * sigma;
    }
    default: throw std::invalid_argument("hermite: unsupported degree " + std::to_string(k) + " (0..4)");
  }
}

/// Frequency window lo < |n| <= hi. A lower bound lo <= 0 includes the origin,
/// so that (0, 2] is exactly the first dyadic block pi_2.
struct FrequencyWindow {
  long long lo = 0;
  long long hi = 0;
};

enum class ChaosKind { mass2, quartic, weighted2 };

/// Value of a Wick-ordered integral together with what it was computed from.
struct ChaosFunctional {
  ChaosKind kind = ChaosKind::mass2;
  double value = 0.0;
  int d = 1;
  int N = 0;
  double sigma = 0.0;  ///< Wick variance parameter actually subtracted.
  FrequencyWindow window{};
  double smoothing = 0.0;
};

/// int :(<nabla>^{-s} P_window u)^2: dx for a sample of the free field, in
/// coefficient space. The Wick constant is the exact variance
/// sum_{window} <n>^{-d-2s}.
inline ChaosFunctional wick_square(const SpectralField& field, FrequencyWindow window, double s) {
  const auto& lat = field.lattice();
  const int d = lat.dim();
  const std::size_t begin = window.lo <= 0 ? 0 : lat.count_within(window.lo);
  const std::size_t end = std::max(begin, lat.count_within(window.hi));
  double energy = 0.0;
  double variance = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double m = s == 0.0 ? 1.0 : lat.bracket_pow(i, -2.0 * s);
    energy += m * std::norm(field[i]);
    variance += m * lat.bracket_pow(i, -static_cast<double>(d));
  }
  return {ChaosKind::weighted2, energy - variance, d, lat.cutoff(), variance, window, s};
}

/// int :(pi_N u)^2: dx = ||pi_N u||_{L^2}^2 - sigma_N, exact in coefficient space.
inline double renormalized_mass(const SpectralField& field, const WickVariance& sigma) {
  if (!sigma.matches(field.dim(), field.cutoff()))
    throw std::invalid_argument("renormalized_mass: Wick variance is for (d=" + std::to_string(sigma.d) +
                                ", N=" + std::to_string(sigma.N) + ") but the field has (d=" +
                                std::to_string(field.dim()) + ", N=" + std::to_string(field.cutoff()) + ")");
  return l2_norm2(field) - sigma.sigma;
}

namespace detail {

inline void check_wick_grid(const GridField& grid, const WickVariance& sigma) {
  if (grid.G < 4 * grid.N + 1)
    throw std::invalid_argument("quartic Wick integral needs G >= 4N+1 (G=" + std::to_string(grid.G) +
                                ", N=" + std::to_string(grid.N) + ")");
  if (sigma.d != grid.d || sigma.N != grid.N)
    throw std::invalid_argument("Wick variance does not match the grid's (d, N)");
}

}  // namespace detail

/// R_N(u) = int :(pi_N u)^4: dx, the grid mean of H_4(u(x); sigma_N).
inline double interaction_rn(const GridField& grid, const WickVariance& sigma) {
  detail::check_wick_grid(grid, sigma);
  const double s = sigma.sigma;
  double total = 0.0;
  for (double x : grid.values) {
    const double x2 = x * x;
    total += x2 * x2 - 6.0 * s * x2;
  }
  return total / static_cast<double>(grid.points()) + 3.0 * s * s;
}

namespace detail {

inline void check_shift_shapes(const GridField& y, const GridField& drift) {
  if (y.d != drift.d || y.G != drift.G) throw std::invalid_argument("shifted interaction: grid shape mismatch");
  if (drift.N > y.N) throw std::invalid_argument("shifted interaction: drift cutoff exceeds the field cutoff");
}

}  // namespace detail

/// R_N(Y + Theta) = grid mean of H_4(Y(x) + Theta(x); sigma_N).
inline double shifted_interaction(const GridField& field, const GridField& drift, const WickVariance& sigma) {
  detail::check_wick_grid(field, sigma);
  detail::check_shift_shapes(field, drift);
  const double s = sigma.sigma;
  double total = 0.0;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    const double x = field.values[k] + drift.values[k];
    const double x2 = x * x;
    total += x2 * x2 - 6.0 * s * x2;
  }
  return total / static_cast<double>(field.points()) + 3.0 * s * s;
}

/// The five terms of R_N(Y + Theta) from the binomial Hermite shift
/// H_4(y + t) = sum_l C(4, l) t^{4-l} H_l(y).
struct ShiftedExpansion {
  double wick_quartic = 0.0;   ///< int :Y^4:
  double cubic_drift = 0.0;    ///< 4 int :Y^3: Theta
  double quadratic_drift = 0.0;///< 6 int :Y^2: Theta^2
  double linear_drift = 0.0;   ///< 4 int Y Theta^3
  double drift_quartic = 0.0;  ///< int Theta^4

  double total() const noexcept {
    return wick_quartic + cubic_drift + quadratic_drift + linear_drift + drift_quartic;
  }
};

inline ShiftedExpansion shifted_expansion(const GridField& field, const GridField& drift, const WickVariance& sigma) {
  detail::check_wick_grid(field, sigma);
  detail::check_shift_shapes(field, drift);
  const double s = sigma.sigma;
  ShiftedExpansion e;
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    const double y = field.values[k];
    const double t = drift.values[k];
    e.wick_quartic += hermite(4, y, s);
    e.cubic_drift += 4.0 * hermite(3, y, s) * t;
    e.quadratic_drift += 6.0 * hermite(2, y, s) * t * t;
    e.linear_drift += 4.0 * y * t * t * t;
    e.drift_quartic += t * t * t * t;
  }
  const double inv = 1.0 / static_cast<double>(field.points());
  e.wick_quartic *= inv;
  e.cubic_drift *= inv;
  e.quadratic_drift *= inv;
  e.linear_drift *= inv;
  e.drift_quartic *= inv;
  return e;
}

/// Exact second moment of int :(<nabla>^{-s} P_window u)^2: dx, namely
/// 2 sum_{window} <n>^{-2d-4s}.
inline double chaos_second_moment(int d, FrequencyWindow window, double s) {
  if (window.hi < 0 || window.hi <= window.lo) return 0.0;
  const auto lat = build_lattice(d, static_cast<int>(window.hi));
  const std::size_t begin = window.lo <= 0 ? 0 : lat->count_within(window.lo);
  double total = 0.0;
  for (std::size_t i = begin; i < lat->size(); ++i) total += lat->bracket_pow(i, -2.0 * d - 4.0 * s);
  return 2.0 * total;
}

namespace detail {

/// Dense self-convolution (a * a)(m) = sum_{n1 + n2 = m} a(n1) a(n2) over the
/// box [-2N, 2N]^d. Cost is quadratic in the lattice size.
inline std::vector<Complex> self_convolution(const Lattice& lat, std::span<const Complex> a, int& side) {
  const int N = lat.cutoff();
  const int d = lat.dim();
  side = 4 * N + 1;
  std::size_t cells = 1;
  for (int c = 0; c < d; ++c) cells *= static_cast<std::size_t>(side);
  std::vector<Complex> conv(cells);
  std::vector<std::size_t> offset(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    std::size_t idx = 0;
    for (int c = 0; c < d; ++c) idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(lat.mode(i)[static_cast<std::size_t>(c)] + 2 * N);
    offset[i] = idx;
  }
  // Index arithmetic: cell(n1 + n2) = offset(n1) + offset(n2) - cell(0) in the mixed radix.
  std::size_t origin = 0;
  for (int c = 0; c < d; ++c) origin = origin * static_cast<std::size_t>(side) + static_cast<std::size_t>(2 * N);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (a[i] == Complex{}) continue;
    for (std::size_t j = 0; j < lat.size(); ++j) conv[offset[i] + offset[j] - origin] += a[i] * a[j];
  }
  return conv;
}

inline void check_pair_budget(std::size_t modes, std::size_t budget, const char* what) {
  if (modes > budget) {
    const double cost = static_cast<double>(modes) * static_cast<double>(modes);
    throw BudgetError(std::string(what) + ": lattice of " + std::to_string(modes) + " modes exceeds the budget of " +
                          std::to_string(budget) + " (estimated cost " + std::to_string(cost) + " pair products)",
                      cost);
  }
}

}  // namespace detail

inline constexpr std::size_t kDefaultOracleBudget = 1000;

/// E[R_N R_M] = 24 sum_{n1+n2+n3+n4=0, |n_i| <= M} prod <n_i>^{-d} for M <= N,
/// evaluated as 24 sum_m (w*w)(m)^2. Since it does not depend on N,
/// E[(R_N - R_M)^2] = E[R_N^2] - E[R_M^2].
inline double interaction_cross_moment(int d, int N, int M, std::size_t budget = kDefaultOracleBudget) {
  if (M > N) throw std::invalid_argument("interaction_cross_moment: requires M <= N");
  if (M < 0) throw std::invalid_argument("interaction_cross_moment: negative cutoff");
  detail::check_dimension(d);
  detail::check_pair_budget(count_modes(d, M), budget, "interaction_cross_moment");
  const auto lat = build_lattice(d, M);
  std::vector<Complex> w(lat->size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = lat->weight(i) * lat->weight(i);
  int side = 0;
  const auto conv = detail::self_convolution(*lat, w, side);
  double total = 0.0;
  for (const auto& c : conv) total += c.real() * c.real();
  return 24.0 * total;
}

/// int u^4 dx computed purely from coefficients: sum_m |(c*c)(m)|^2.
inline double quartic_integral(const SpectralField& field, std::size_t budget = 20000) {
  detail::check_pair_budget(field.size(), budget, "quartic_integral");
  int side = 0;
  const auto conv = detail::self_convolution(field.lattice(), field.coeffs(), side);
  double total = 0.0;
  for (const auto& c : conv) total += std::norm(c);
  return total;
}

/// Dyadic chaos diagnostics of a free-field sample Y_N:
///   B1 = ( sum_k 2^{5dk/2} ( int :(<nabla>^{-d/2} Pi_{>k} Y_N)^2: )^2 )^{1/2}
///   B2 = sum_k | int :(Pi_k Y_N)^2: |
/// with k = 1 .. max(1, ceil(log2 N)).
struct ChaosDiagnostics {
  double b1 = 0.0;
  double b2 = 0.0;
};

inline int dyadic_depth(int N) {
  int k = 0;
  while ((1LL << k) < N) ++k;
  return std::max(1, k);
}

inline ChaosDiagnostics chaos_diagnostics(const SpectralField& field) {
  const int N = field.cutoff();
  const int d = field.dim();
  const int depth = dyadic_depth(N);
  double b1sq = 0.0;
  double b2 = 0.0;
  for (int k = 1; k <= depth; ++k) {
    const long long upper = 1LL << k;
    const double tail = wick_square(field, {upper, N}, 0.5 * d).value;
    b1sq += std::pow(2.0, 2.5 * d * k) * tail * tail;
    const FrequencyWindow block = k == 1 ? FrequencyWindow{0, 2} : FrequencyWindow{upper / 2, upper};
    b2 += std::abs(wick_square(field, block, 0.0).value);
  }
  return {std::sqrt(b1sq), b2};
}

}  // namespace loglab

#endif  // LOGLAB_WICK_HPP
