#ifndef LOGLAB_DRIFT_HPP
#define LOGLAB_DRIFT_HPP

/// \file
/// Deterministic drifts for the variational (Boue-Dupuis) lower bound
///
///   log E[exp(F(Y_N))] >= E[F(Y_N + Theta)] - 1/2 int_0^1 ||theta(t)||^2 dt
///
/// with F = min(lambda R_N, L) 1{|int :(Y_N + Theta)^2:| <= K} and the
/// time-constant drift theta = sqrt(gamma K_M) <nabla>^{d/2} f_M, so that
/// Theta = sqrt(gamma K_M) f_M. The bump f_M concentrates at frequency scale M
/// with unit L^2 norm and L^4 norm growing like M^{d/4}.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/monte_carlo.hpp"
#include "loglab/partition.hpp"
#include "loglab/spectral_field.hpp"
#include "loglab/wick.hpp"

namespace loglab {

/// Radial profile fhat(xi) = c exp(-1/(1 - t^2)), t = (|xi| - 5/8) / (3/8),
/// supported in the annulus 1/4 < |xi| < 1 and normalized so that
/// int_{R^d} fhat^2 dxi = 1.
class BumpProfile {
 public:
  static constexpr double kInner = 0.25;
  static constexpr double kOuter = 1.0;

  explicit BumpProfile(int d) : d_(d) {
    detail::check_dimension(d);
    scale_ = 1.0;
    const double raw = radial_moment(0.0);
    scale_ = 1.0 / std::sqrt(raw);
    // Independent quadrature rule as a construction-time check.
    boost::math::quadrature::tanh_sinh<double> ts;
    const double check = sphere_area() * ts.integrate([this](double r) {
      const double f = (*this)(r);
      return std::pow(r, d_ - 1) * f * f;
    }, kInner, kOuter);
    if (std::abs(check - 1.0) > 1e-8)
      throw std::runtime_error("BumpProfile: L^2 normalization check failed (" + std::to_string(check) + ")");
  }

  int dim() const noexcept { return d_; }

  double operator()(double radius) const {
    const double r = std::abs(radius);
    if (r <= kInner || r >= kOuter) return 0.0;
    const double t = (r - 0.625) / 0.375;
    const double q = 1.0 - t * t;
    if (q <= 0.0) return 0.0;
    return scale_ * std::exp(-1.0 / q);
  }

  /// int_{R^d} |xi|^a fhat(xi)^2 dxi.
  double radial_moment(double a) const {
    auto integrand = [this, a](double r) {
      const double f = (*this)(r);
      return std::pow(r, d_ - 1 + a) * f * f;
    };
    double error = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, kInner, kOuter, 15, 1e-14, &error);
    return sphere_area() * value;
  }

  /// Surface measure of the unit sphere S^{d-1} (two points when d = 1).
  double sphere_area() const noexcept {
    switch (d_) {
      case 1: return 2.0;
      case 2: return 2.0 * std::numbers::pi;
      default: return 4.0 * std::numbers::pi;
    }
  }

 private:
  int d_;
  double scale_ = 1.0;
};

/// f_M = M^{-d/2} sum_{|n| <= M} fhat(n / M) e_n.
inline SpectralField build_fM(const BumpProfile& profile, int d, int M) {
  if (profile.dim() != d) throw std::invalid_argument("build_fM: profile dimension mismatch");
  if (M < 4) throw std::invalid_argument("build_fM: M must be >= 4 (got " + std::to_string(M) + ")");
  const auto lattice = build_lattice(d, M);
  const double amp = std::pow(static_cast<double>(M), -0.5 * d);
  std::vector<Complex> coeff(lattice->size());
  for (std::size_t i = 0; i < coeff.size(); ++i)
    coeff[i] = amp * profile(std::sqrt(static_cast<double>(lattice->norm2(i))) / M);
  return SpectralField(lattice, std::move(coeff));
}

struct Leo1Quantities {
  double m2 = 0.0;  ///< int f_M^2
  double m4 = 0.0;  ///< int f_M^4
  double s2 = 0.0;  ///< int (<nabla>^{-d/2} f_M)^2
};

inline Leo1Quantities leo1_quantities(const SpectralField& fM) {
  Leo1Quantities q;
  q.m2 = l2_norm2(fM);
  const auto grid = to_grid(fM);
  double total = 0.0;
  for (double v : grid.values) total += v * v * v * v;
  q.m4 = total / static_cast<double>(grid.points());
  q.s2 = l2_norm2(smooth(fM, 0.5 * fM.dim()));
  return q;
}

/// Theta_gamma = sqrt(gamma K_M) f_M and its exact cost
/// int_0^1 ||theta||^2 dt = gamma K_M sum <n>^d |fhat_M(n)|^2.
struct DriftProfile {
  int M = 0;
  SpectralField fM;
  double gamma = 0.0;
  double KM = 0.0;
  double theta_cost = 0.0;

  double amplitude() const { return std::sqrt(gamma * KM); }
  SpectralField theta() const { return amplitude() * fM; }
};

inline DriftProfile make_drift(const BumpProfile& profile, int d, int M, double gamma, double KM) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("make_drift: gamma must be >= 0");
  if (!(KM >= 0.0) || std::isinf(KM)) throw std::invalid_argument("make_drift: K_M must be finite and >= 0");
  auto fM = build_fM(profile, d, M);
  const double cost = gamma * KM * l2_norm2(smooth(fM, -0.5 * d));
  return DriftProfile{M, std::move(fM), gamma, KM, cost};
}

inline double drift_cost(const DriftProfile& drift) { return drift.theta_cost; }

/// Same cost through the grid: gamma K_M times the grid mean of (<nabla>^{d/2} f_M)^2.
inline double drift_cost_on_grid(const DriftProfile& drift) {
  const auto grid = to_grid(smooth(drift.fM, -0.5 * drift.fM.dim()));
  double total = 0.0;
  for (double v : grid.values) total += v * v;
  return drift.gamma * drift.KM * total / static_cast<double>(grid.points());
}

struct WitnessConfig {
  int d = 2;
  int N = 32;
  int M = 32;
  double gamma = 0.05;
  double lambda = 0.0;
  double K = 1.0;
  double KM = std::numeric_limits<double>::quiet_NaN();  ///< drift amplitude cutoff; NaN means K
  double L = 1.0;
  std::uint64_t nsamples = 1000;
  std::uint64_t seed = 0;
  int workers = 1;

  double drift_cutoff() const { return std::isnan(KM) ? K : KM; }

  void validate() const {
    detail::check_dimension(d);
    if (M > N) throw std::invalid_argument("witness: requires M <= N");
    if (!std::isfinite(L)) throw std::invalid_argument("witness: the cap L must be finite");
    if (nsamples < 2) throw std::invalid_argument("witness: nsamples must be >= 2");
    if (!(K > 0.0)) throw std::invalid_argument("witness: K must be positive");
  }
};

namespace detail {

inline bool within_cutoff(double mass, double K) { return (std::isinf(K) && K > 0) || std::abs(mass) <= K; }

}  // namespace detail

/// Everything about the drift that does not depend on the Gaussian sample.
class WitnessContext {
 public:
  WitnessContext(const WitnessConfig& cfg, const BumpProfile& profile)
      : cfg_((cfg.validate(), cfg)),
        lattice_(build_lattice(cfg.d, cfg.N)),
        sigma_(sigma(cfg.d, cfg.N)),
        drift_(make_drift(profile, cfg.d, cfg.M, cfg.gamma, cfg.drift_cutoff())),
        theta_(with_cutoff(drift_.theta(), lattice_)),
        theta_grid_(to_grid(theta_)),
        theta_mass_(l2_norm2(theta_)) {}

  const WitnessConfig& config() const noexcept { return cfg_; }
  const LatticePtr& lattice() const noexcept { return lattice_; }
  const WickVariance& wick_variance() const noexcept { return sigma_; }
  const DriftProfile& drift() const noexcept { return drift_; }
  const SpectralField& theta() const noexcept { return theta_; }
  const GridField& theta_grid() const noexcept { return theta_grid_; }
  double theta_mass() const noexcept { return theta_mass_; }

  /// int :(Y_N + Theta)^2: = int :Y_N^2: + 2 int Y_N Theta + int Theta^2.
  double shifted_mass(const SpectralField& y) const {
    return renormalized_mass(y, sigma_) + 2.0 * inner_product(y, theta_) + theta_mass_;
  }

  /// min(lambda R_N(Y + Theta), L) 1{shifted event} - cost / 2.
  SampleValue integrand(const SpectralField& y) const {
    const double half_cost = 0.5 * drift_.theta_cost;
    const bool event = detail::within_cutoff(shifted_mass(y), cfg_.K);
    if (!event) return {0.0 - half_cost, false, false, false};
    const double lr = cfg_.lambda == 0.0 ? 0.0 : cfg_.lambda * shifted_interaction(to_grid(y), theta_grid_, sigma_);
    return {std::min(lr, cfg_.L) - half_cost, true, lr > cfg_.L, false};
  }

  /// Same integrand with a precomputed grid of Y (shared with other estimators).
  SampleValue integrand(const SpectralField& y, const GridField& y_grid) const {
    const double half_cost = 0.5 * drift_.theta_cost;
    const bool event = detail::within_cutoff(shifted_mass(y), cfg_.K);
    if (!event) return {0.0 - half_cost, false, false, false};
    const double lr = cfg_.lambda == 0.0 ? 0.0 : cfg_.lambda * shifted_interaction(y_grid, theta_grid_, sigma_);
    return {std::min(lr, cfg_.L) - half_cost, true, lr > cfg_.L, false};
  }

  bool shifted_event(const SpectralField& y) const { return detail::within_cutoff(shifted_mass(y), cfg_.K); }

 private:
  WitnessConfig cfg_;
  LatticePtr lattice_;
  WickVariance sigma_;
  DriftProfile drift_;
  SpectralField theta_;
  GridField theta_grid_;
  double theta_mass_;
};

/// Monte Carlo value of E[F(Y_N + Theta)] - cost / 2, a lower bound on
/// log E[exp(F(Y_N))]. Flags "cap_saturated" when the cap binds on more than
/// half of the samples.
inline EstimateRecord witness_lower_bound(const WitnessConfig& cfg, const BumpProfile& profile) {
  const WitnessContext ctx(cfg, profile);
  const auto samples = map_streams<SampleValue>(cfg.nsamples, cfg.workers, [&](std::uint64_t stream) {
    return ctx.integrand(sample_field(ctx.lattice(), cfg.seed, stream));
  });
  auto record = summarize(samples, false);
  if (record.cap_hit_rate > 0.5) record.flags.emplace_back("cap_saturated");
  return record;
}

/// The integrand with Y frozen to zero, from the exact deterministic integrals:
/// min(lambda (Q - 6 sigma m + 3 sigma^2), L) 1{|m - sigma| <= K} - cost / 2
/// with m = gamma K_M m2 and Q = (gamma K_M)^2 m4.
inline double frozen_witness(const DriftProfile& drift, const Leo1Quantities& q, const WickVariance& sigma,
                             double lambda, double K, double L) {
  const double amp2 = drift.gamma * drift.KM;
  const double mass = amp2 * q.m2;
  const double quartic = amp2 * amp2 * q.m4;
  const double s = sigma.sigma;
  const double half_cost = 0.5 * drift.theta_cost;
  if (!detail::within_cutoff(mass - s, K)) return 0.0 - half_cost;
  const double lr = lambda * (quartic - 6.0 * s * mass + 3.0 * s * s);
  return std::min(lr, L) - half_cost;
}

struct ShiftedEventProbability {
  EstimateRecord empirical;
  double chebyshev = 0.0;       ///< E[(shifted mass)^2] / K^2
  double wick_variance = 0.0;   ///< 2 sum <n>^{-2d}
  double cross_moment = 0.0;    ///< E|int Y_N Theta|^2
  double drift_mass_sq = 0.0;   ///< (int Theta^2)^2
};

/// P(|int :(Y_N + Theta)^2:| <= K) together with the Chebyshev lower bound
/// 1 - E[(int :(Y_N + Theta)^2:)^2] / K^2, whose second moment is exact:
/// Var(int :Y_N^2:) + 4 E|int Y_N Theta|^2 + (int Theta^2)^2.
inline ShiftedEventProbability shifted_event_probability(const WitnessConfig& cfg, const BumpProfile& profile) {
  const WitnessContext ctx(cfg, profile);
  const auto samples = map_streams<SampleValue>(cfg.nsamples, cfg.workers, [&](std::uint64_t stream) {
    const bool hit = ctx.shifted_event(sample_field(ctx.lattice(), cfg.seed, stream));
    return SampleValue{hit ? 1.0 : 0.0, hit, false, false};
  });
  ShiftedEventProbability out;
  out.empirical = summarize(samples, false);
  out.wick_variance = chaos_second_moment(cfg.d, {0, cfg.N}, 0.0);
  const auto& lat = *ctx.lattice();
  double cross = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) cross += lat.weight(i) * lat.weight(i) * std::norm(ctx.theta()[i]);
  out.cross_moment = cross;
  out.drift_mass_sq = ctx.theta_mass() * ctx.theta_mass();
  out.chebyshev = (out.wick_variance + 4.0 * out.cross_moment + out.drift_mass_sq) / (cfg.K * cfg.K);
  return out;
}

}  // namespace loglab

#endif  // LOGLAB_DRIFT_HPP
