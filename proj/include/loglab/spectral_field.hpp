#ifndef LOGLAB_SPECTRAL_FIELD_HPP
#define LOGLAB_SPECTRAL_FIELD_HPP

/// \file
/// Frequency lattices on the torus T^d = (R / 2 pi Z)^d, band-limited real
/// fields stored by their Fourier coefficients, exact sampling of the
/// log-correlated Gaussian free field (spectral weights <n>^{-d}), and
/// synthesis onto a dealiased uniform grid. Integrals over T^d always use the
/// normalized Lebesgue measure, so they are grid means.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "loglab/errors.hpp"
#include "loglab/fft.hpp"
#include "loglab/rng.hpp"

namespace loglab {

using Mode = std::array<int, 3>;
using Complex = std::complex<double>;

inline constexpr std::size_t kDefaultModeBudget = std::size_t{1} << 24;

namespace detail {

inline long long isqrt(long long v) {
  if (v < 0) return -1;
  auto r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

inline void check_dimension(int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("unsupported dimension d=" + std::to_string(d) + " (expected 1, 2 or 3)");
}

inline std::uint64_t pack_mode(const Mode& n) {
  constexpr std::int64_t kOffset = std::int64_t{1} << 20;
  std::uint64_t key = 0;
  for (int c = 0; c < 3; ++c) key = (key << 21) | static_cast<std::uint64_t>(n[static_cast<std::size_t>(c)] + kOffset);
  return key;
}

}  // namespace detail

/// Exact number of n in Z^d with |n| <= N, without enumerating the ball.
inline std::size_t count_modes(int d, int N) {
  detail::check_dimension(d);
  if (N < 0) return 0;
  const long long r2 = static_cast<long long>(N) * N;
  auto column = [](long long rest) -> std::size_t {
    return rest < 0 ? 0 : static_cast<std::size_t>(2 * detail::isqrt(rest) + 1);
  };
  if (d == 1) return column(r2);
  std::size_t total = 0;
  if (d == 2) {
    for (long long a = -N; a <= N; ++a) total += column(r2 - a * a);
    return total;
  }
  for (long long a = -N; a <= N; ++a)
    for (long long b = -N; b <= N; ++b) total += column(r2 - a * a - b * b);
  return total;
}

/// All n in Z^d with Euclidean norm |n| <= N, ordered by (|n|^2, lexicographic).
/// The ordering makes the lattice of any smaller cutoff a prefix of this one.
class Lattice {
 public:
  static std::shared_ptr<const Lattice> build(int d, int N, std::size_t mode_budget = kDefaultModeBudget) {
    detail::check_dimension(d);
    if (N < 0) throw std::invalid_argument("negative cutoff N=" + std::to_string(N));
    const std::size_t count = count_modes(d, N);
    if (count > mode_budget) {
      throw BudgetError("lattice (d=" + std::to_string(d) + ", N=" + std::to_string(N) + ") has " +
                            std::to_string(count) + " modes, above the budget of " + std::to_string(mode_budget),
                        static_cast<double>(count));
    }
    return std::shared_ptr<const Lattice>(new Lattice(d, N, count));
  }

  int dim() const noexcept { return d_; }
  int cutoff() const noexcept { return N_; }
  std::size_t size() const noexcept { return modes_.size(); }

  std::span<const Mode> modes() const noexcept { return modes_; }
  const Mode& mode(std::size_t i) const { return modes_[i]; }
  int norm2(std::size_t i) const { return norm2_[i]; }
  std::size_t negation(std::size_t i) const { return negation_[i]; }
  /// True for n = 0 and for the member of each {n, -n} pair whose first nonzero entry is positive.
  bool representative(std::size_t i) const { return representative_[i] != 0; }
  std::uint64_t tag(std::size_t i) const { return tags_[i]; }
  /// <n>^{-d/2}, the standard deviation weight of the free field.
  double weight(std::size_t i) const { return weight_[i]; }
  /// <n>^{s} = (1 + |n|^2)^{s/2}.
  double bracket_pow(std::size_t i, double s) const { return std::pow(1.0 + norm2_[i], 0.5 * s); }

  /// Number of modes with |n| <= M, i.e. the prefix length of the sub-lattice of cutoff M.
  std::size_t count_within(long long M) const {
    if (M < 0) return 0;
    const long long r2 = M * M;
    return static_cast<std::size_t>(
        std::upper_bound(norm2_.begin(), norm2_.end(), r2, [](long long v, int x) { return v < x; }) - norm2_.begin());
  }

  /// Index of mode n, or size() when n is not in the lattice.
  std::size_t find(const Mode& n) const {
    auto it = index_.find(detail::pack_mode(n));
    return it == index_.end() ? size() : it->second;
  }

 private:
  Lattice(int d, int N, std::size_t count) : d_(d), N_(N) {
    modes_.reserve(count);
    const int lo1 = d >= 2 ? -N : 0;
    const int lo2 = d >= 3 ? -N : 0;
    const long long r2 = static_cast<long long>(N) * N;
    for (int a = -N; a <= N; ++a)
      for (int b = lo1; b <= -lo1; ++b)
        for (int c = lo2; c <= -lo2; ++c)
          if (static_cast<long long>(a) * a + static_cast<long long>(b) * b + static_cast<long long>(c) * c <= r2)
            modes_.push_back({a, b, c});
    auto n2 = [](const Mode& n) { return n[0] * n[0] + n[1] * n[1] + n[2] * n[2]; };
    std::stable_sort(modes_.begin(), modes_.end(), [&](const Mode& x, const Mode& y) {
      const int nx = n2(x), ny = n2(y);
      return nx != ny ? nx < ny : x < y;
    });
    const std::size_t size = modes_.size();
    norm2_.resize(size);
    negation_.resize(size);
    representative_.resize(size);
    tags_.resize(size);
    weight_.resize(size);
    index_.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      norm2_[i] = n2(modes_[i]);
      index_.emplace(detail::pack_mode(modes_[i]), i);
    }
    for (std::size_t i = 0; i < size; ++i) {
      const Mode& n = modes_[i];
      negation_[i] = index_.at(detail::pack_mode({-n[0], -n[1], -n[2]}));
      int first = 0;
      for (int v : n)
        if (v != 0) {
          first = v;
          break;
        }
      representative_[i] = first >= 0 ? 1 : 0;
      tags_[i] = detail::pack_mode(n);
      weight_[i] = std::pow(1.0 + norm2_[i], -0.25 * d_);
    }
  }

  int d_;
  int N_;
  std::vector<Mode> modes_;
  std::vector<int> norm2_;
  std::vector<std::size_t> negation_;
  std::vector<std::uint8_t> representative_;
  std::vector<std::uint64_t> tags_;
  std::vector<double> weight_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

using LatticePtr = std::shared_ptr<const Lattice>;

inline LatticePtr build_lattice(int d, int N, std::size_t mode_budget = kDefaultModeBudget) {
  return Lattice::build(d, N, mode_budget);
}

/// Fourier coefficients c(n), |n| <= N, of a real trigonometric polynomial
/// u(x) = sum_n c(n) e^{i n.x}. Immutable once constructed.
class SpectralField {
 public:
  SpectralField(LatticePtr lattice, std::vector<Complex> coeff) : lattice_(std::move(lattice)), coeff_(std::move(coeff)) {
    if (!lattice_) throw std::invalid_argument("SpectralField: null lattice");
    if (coeff_.size() != lattice_->size()) throw std::invalid_argument("SpectralField: coefficient count mismatch");
  }

  static SpectralField zeros(LatticePtr lattice) {
    const std::size_t n = lattice->size();
    return SpectralField(std::move(lattice), std::vector<Complex>(n));
  }

  const Lattice& lattice() const noexcept { return *lattice_; }
  const LatticePtr& lattice_ptr() const noexcept { return lattice_; }
  int dim() const noexcept { return lattice_->dim(); }
  int cutoff() const noexcept { return lattice_->cutoff(); }
  std::size_t size() const noexcept { return coeff_.size(); }
  std::span<const Complex> coeffs() const noexcept { return coeff_; }
  Complex operator[](std::size_t i) const { return coeff_[i]; }

  /// Largest |c(-n) - conj(c(n))| together with |Im c(0)|.
  double hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < coeff_.size(); ++i)
      worst = std::max(worst, std::abs(coeff_[lattice_->negation(i)] - std::conj(coeff_[i])));
    return worst;
  }

  friend SpectralField operator+(const SpectralField& a, const SpectralField& b) { return combine(a, b, 1.0); }
  friend SpectralField operator-(const SpectralField& a, const SpectralField& b) { return combine(a, b, -1.0); }
  friend SpectralField operator*(double s, const SpectralField& a) {
    std::vector<Complex> out(a.coeff_);
    for (auto& c : out) c *= s;
    return SpectralField(a.lattice_, std::move(out));
  }

 private:
  static SpectralField combine(const SpectralField& a, const SpectralField& b, double sign) {
    if (a.dim() != b.dim() || a.cutoff() != b.cutoff())
      throw std::invalid_argument("SpectralField: lattice mismatch in arithmetic");
    std::vector<Complex> out(a.coeff_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * b.coeff_[i];
    return SpectralField(a.lattice_, std::move(out));
  }

  LatticePtr lattice_;
  std::vector<Complex> coeff_;
};

/// sigma_N = sum_{|n| <= N} <n>^{-d}, the pointwise variance of the truncated field.
struct WickVariance {
  int d = 1;
  int N = 0;
  double sigma = 1.0;

  bool matches(int dim, int cutoff) const noexcept { return d == dim && N == cutoff; }
};

/// Direct lattice sum, accumulated in ascending |n|.
inline WickVariance sigma(int d, int N) {
  const auto lattice = build_lattice(d, N);
  double total = 0.0;
  for (std::size_t i = 0; i < lattice->size(); ++i) total += lattice->weight(i) * lattice->weight(i);
  return {d, N, total};
}

/// Draw the truncated log-correlated field: c(n) = g_n <n>^{-d/2} with g_0 real
/// N(0,1) and, per pair {n,-n}, g_n = (a + i b)/sqrt(2), g_{-n} = conj(g_n).
/// Each pair's Gaussians are addressed by (master_seed, stream, n), so a draw at
/// cutoff N projects exactly onto the draw at any smaller cutoff.
inline SpectralField sample_field(const LatticePtr& lattice, std::uint64_t master_seed, std::uint64_t stream) {
  const StreamRng rng(master_seed, stream);
  std::vector<Complex> coeff(lattice->size());
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < lattice->size(); ++i) {
    if (!lattice->representative(i)) continue;
    const auto [a, b] = rng.normal_pair(lattice->tag(i));
    const double w = lattice->weight(i);
    if (lattice->norm2(i) == 0) {
      coeff[i] = Complex(a * w, 0.0);
    } else {
      const Complex g(a * inv_sqrt2 * w, b * inv_sqrt2 * w);
      coeff[i] = g;
      coeff[lattice->negation(i)] = std::conj(g);
    }
  }
  return SpectralField(lattice, std::move(coeff));
}

/// Sharp projector pi_M: zero every coefficient with |n| > M.
inline SpectralField project(const SpectralField& field, int M) {
  if (M < 0) throw std::invalid_argument("project: negative cutoff M=" + std::to_string(M));
  std::vector<Complex> out(field.coeffs().begin(), field.coeffs().end());
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(field.lattice().count_within(M)), out.end(), Complex{});
  return SpectralField(field.lattice_ptr(), std::move(out));
}

/// Keep the modes with lo < |n| <= hi; lo <= 0 keeps the origin as well.
inline SpectralField band(const SpectralField& field, long long lo, long long hi) {
  const auto& lat = field.lattice();
  const std::size_t begin = lo <= 0 ? 0 : lat.count_within(lo);
  const std::size_t end = std::max(begin, lat.count_within(hi));
  std::vector<Complex> out(field.size());
  std::copy(field.coeffs().begin() + static_cast<std::ptrdiff_t>(begin),
            field.coeffs().begin() + static_cast<std::ptrdiff_t>(end), out.begin() + static_cast<std::ptrdiff_t>(begin));
  return SpectralField(field.lattice_ptr(), std::move(out));
}

/// Littlewood-Paley block: Pi_1 = pi_2, Pi_j = pi_{2^j} - pi_{2^{j-1}}.
inline SpectralField dyadic_block(const SpectralField& field, int j) {
  if (j < 1) throw std::invalid_argument("dyadic_block: block index must be >= 1");
  const long long cap = std::max<long long>(field.cutoff(), 2);
  auto pow2 = [cap](int k) { return k >= 40 ? cap : std::min(cap, 1LL << k); };
  if (j == 1) return band(field, 0, 2);
  return band(field, pow2(j - 1), pow2(j));
}

/// Fourier multiplier <nabla>^{-s}: c(n) -> <n>^{-s} c(n).
inline SpectralField smooth(const SpectralField& field, double s) {
  std::vector<Complex> out(field.coeffs().begin(), field.coeffs().end());
  if (s != 0.0)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= field.lattice().bracket_pow(i, -s);
  return SpectralField(field.lattice_ptr(), std::move(out));
}

/// Re-express a field on the lattice of another cutoff (truncating or zero-padding).
inline SpectralField with_cutoff(const SpectralField& field, const LatticePtr& target) {
  if (target->dim() != field.dim()) throw std::invalid_argument("with_cutoff: dimension mismatch");
  std::vector<Complex> out(target->size());
  const std::size_t n = std::min(out.size(), field.size());
  std::copy(field.coeffs().begin(), field.coeffs().begin() + static_cast<std::ptrdiff_t>(n), out.begin());
  return SpectralField(target, std::move(out));
}

/// Real part of sum_n a(n) conj(b(n)) = integral of a*b over T^d.
inline double inner_product(const SpectralField& a, const SpectralField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  const std::size_t n = std::min(a.size(), b.size());
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += (a[i] * std::conj(b[i])).real();
  return total;
}

inline double l2_norm2(const SpectralField& a) {
  double total = 0.0;
  for (const auto& c : a.coeffs()) total += std::norm(c);
  return total;
}

/// Direct evaluation of the trigonometric polynomial at one point.
inline double point_value(const SpectralField& field, const std::array<double, 3>& x) {
  double total = 0.0;
  const auto& lat = field.lattice();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Mode& n = lat.mode(i);
    const double phase = n[0] * x[0] + n[1] * x[1] + n[2] * x[2];
    total += field[i].real() * std::cos(phase) - field[i].imag() * std::sin(phase);
  }
  return total;
}

/// Real samples u(x_k) on the uniform grid x_k = 2 pi k / G, k in [0, G)^d.
struct GridField {
  int d = 1;
  int G = 1;
  int N = 0;
  std::vector<double> values;

  std::size_t points() const noexcept { return values.size(); }
  double mean() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
  }
};

/// Smallest integer >= 4N+1 with no prime factor above 7.
inline int grid_size_for(int N) {
  for (int g = 4 * std::max(N, 0) + 1;; ++g) {
    int r = g;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return g;
  }
}

namespace detail {

inline std::size_t grid_index(const Mode& n, int d, int G) {
  std::size_t idx = 0;
  for (int c = 0; c < d; ++c) {
    int k = n[static_cast<std::size_t>(c)] % G;
    if (k < 0) k += G;
    idx = idx * static_cast<std::size_t>(G) + static_cast<std::size_t>(k);
  }
  return idx;
}

inline std::size_t grid_points(int d, int G) {
  std::size_t total = 1;
  for (int c = 0; c < d; ++c) total *= static_cast<std::size_t>(G);
  return total;
}

}  // namespace detail

/// Synthesize on a G^d grid. G >= 4N+1 is required so that grid means of
/// products of up to four such fields carry no aliasing error.
inline GridField to_grid(const SpectralField& field, int G) {
  const int N = field.cutoff();
  if (G < 4 * N + 1)
    throw std::invalid_argument("to_grid: G=" + std::to_string(G) + " is below the dealiasing bound 4N+1=" +
                                std::to_string(4 * N + 1));
  const int d = field.dim();
  std::vector<Complex> buf(detail::grid_points(d, G));
  const auto& lat = field.lattice();
  for (std::size_t i = 0; i < field.size(); ++i) buf[detail::grid_index(lat.mode(i), d, G)] = field[i];
  fft::transform(buf, d, G, fft::Direction::backward);
  GridField grid{d, G, N, std::vector<double>(buf.size())};
  for (std::size_t k = 0; k < buf.size(); ++k) grid.values[k] = buf[k].real();
  return grid;
}

inline GridField to_grid(const SpectralField& field) { return to_grid(field, grid_size_for(field.cutoff())); }

/// Coefficients of a grid field on the given lattice (inverse of to_grid).
inline SpectralField from_grid(const GridField& grid, const LatticePtr& lattice) {
  if (lattice->dim() != grid.d) throw std::invalid_argument("from_grid: dimension mismatch");
  if (grid.G < 2 * lattice->cutoff() + 1) throw std::invalid_argument("from_grid: grid too coarse for lattice");
  std::vector<Complex> buf(grid.values.begin(), grid.values.end());
  fft::transform(buf, grid.d, grid.G, fft::Direction::forward);
  const double scale = 1.0 / static_cast<double>(buf.size());
  std::vector<Complex> coeff(lattice->size());
  for (std::size_t i = 0; i < coeff.size(); ++i)
    coeff[i] = buf[detail::grid_index(lattice->mode(i), grid.d, grid.G)] * scale;
  return SpectralField(lattice, std::move(coeff));
}

/// Pointwise sum of two grids sharing (d, G).
inline GridField add(const GridField& a, const GridField& b) {
  if (a.d != b.d || a.G != b.G) throw std::invalid_argument("GridField add: shape mismatch");
  GridField out{a.d, a.G, std::max(a.N, b.N), a.values};
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += b.values[k];
  return out;
}

}  // namespace loglab

#endif  // LOGLAB_SPECTRAL_FIELD_HPP
