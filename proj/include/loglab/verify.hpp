#ifndef LOGLAB_VERIFY_HPP
#define LOGLAB_VERIFY_HPP

/// \file
/// Verification suites: each returns a table of named checks with the measured
/// value, the expected value and the tolerance that decided pass or fail.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/drift.hpp"
#include "loglab/monte_carlo.hpp"
#include "loglab/partition.hpp"
#include "loglab/rng.hpp"
#include "loglab/spectral_field.hpp"
#include "loglab/wick.hpp"

namespace loglab::verify {

struct Check {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Table {
  std::string suite;
  std::vector<Check> checks;

  bool passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  Table& append(const Table& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    return *this;
  }
};

struct Options {
  std::uint64_t seed = 1;
  int workers = 1;
};

// Check constructors. Non-finite measurements always fail.

inline Check exact(std::string name, double measured, double expected) {
  return {std::move(name), measured, expected, 0.0, measured == expected};
}

/// |measured - expected| <= tol * |expected| (absolute tol when expected is 0).
inline Check relative(std::string name, double measured, double expected, double tol) {
  const double scale = expected == 0.0 ? 1.0 : std::abs(expected);
  const bool ok = std::isfinite(measured) && std::abs(measured - expected) <= tol * scale;
  return {std::move(name), measured, expected, tol * scale, ok};
}

inline Check absolute(std::string name, double measured, double expected, double tol) {
  const bool ok = std::isfinite(measured) && std::abs(measured - expected) <= tol;
  return {std::move(name), measured, expected, tol, ok};
}

/// Monte Carlo mean within z standard errors of the expected value.
inline Check within_se(std::string name, const EstimateRecord& r, double expected, double z) {
  return absolute(std::move(name), r.mean, expected, z * r.standard_error);
}

inline Check at_most(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, 0.0, std::isfinite(measured) && measured <= bound};
}

inline Check at_least(std::string name, double measured, double bound) {
  return {std::move(name), measured, bound, 0.0, std::isfinite(measured) && measured >= bound};
}

/// lo <= measured <= hi, reported as expected = midpoint, tolerance = half width.
inline Check in_window(std::string name, double measured, double lo, double hi) {
  return {std::move(name), measured, 0.5 * (lo + hi), 0.5 * (hi - lo), std::isfinite(measured) && measured >= lo && measured <= hi};
}

inline void print(std::ostream& os, const Table& table) {
  os << "suite " << table.suite << "\n";
  std::size_t width = 5;
  for (const auto& c : table.checks) width = std::max(width, c.name.size());
  for (const auto& c : table.checks) {
    std::ostringstream line;
    line.precision(10);
    line << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << std::string(width - c.name.size() + 2, ' ')
         << "measured=" << c.measured << " expected=" << c.expected << " tol=" << c.tolerance;
    os << line.str() << "\n";
  }
  os << (table.passed() ? "suite passed" : "suite FAILED") << "\n";
}

namespace detail {


/// Largest |a_i - b_i| over coefficients of two fields on the same lattice.
inline double coeff_gap(const SpectralField& a, const SpectralField& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double grid_mean_product(const GridField& a, const GridField& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) total += a.values[i] * b.values[i];
  return total / static_cast<double>(a.points());
}

inline double grid_mean_hermite(const GridField& g, int k, double s) {
  double total = 0.0;
  for (double v : g.values) total += hermite(k, v, s);
  return total / static_cast<double>(g.points());
}

inline double binomial4(int l) {
  static constexpr double table[] = {1.0, 4.0, 6.0, 4.0, 1.0};
  return table[l];
}

}  // namespace detail

/// Hermite table values and the binomial shift identity
/// H_4(y + t; s) = sum_l C(4, l) t^{4-l} H_l(y; s) on 10^3 random triples.
inline Table hermite_checks(const Options& opt = {}) {
  Table t{"hermite", {}};
  t.checks.push_back(exact("H0(1.7;0.3)", hermite(0, 1.7, 0.3), 1.0));
  t.checks.push_back(exact("H1(-2.5;4)", hermite(1, -2.5, 4.0), -2.5));
  t.checks.push_back(exact("H2(3;2)", hermite(2, 3.0, 2.0), 7.0));
  t.checks.push_back(exact("H3(2;1)", hermite(3, 2.0, 1.0), 2.0));
  t.checks.push_back(exact("H4(2;1)", hermite(4, 2.0, 1.0), -5.0));
  t.checks.push_back(exact("H4(0;2)", hermite(4, 0.0, 2.0), 12.0));

  const StreamRng rng(opt.seed, 0x4e52u);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto [a, b] = rng.uniform_pair(2 * i);
    const auto [c, unused] = rng.uniform_pair(2 * i + 1);
    (void)unused;
    const double y = 8.0 * a - 4.0;
    const double shift = 8.0 * b - 4.0;
    const double s = 4.0 * c;
    const double lhs = hermite(4, y + shift, s);
    double rhs = 0.0;
    double scale = 0.0;
    for (int l = 0; l <= 4; ++l) {
      const double term = detail::binomial4(l) * std::pow(shift, 4 - l) * hermite(l, y, s);
      rhs += term;
      scale += std::abs(term);
    }
    worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(lhs), scale, 1e-300}));
  }
  t.checks.push_back(at_most("shift identity, max relative error over 1000 triples", worst, 1e-12));
  return t;
}

/// Projection and dyadic identities, which hold exactly.
inline Table algebra_checks(const Options& opt = {}) {
  Table t{"algebra", {}};
  const auto lat = build_lattice(2, 8);
  const auto u = sample_field(lat, opt.seed, 0);
  t.checks.push_back(exact("project(u, N) = u", detail::coeff_gap(project(u, 8), u), 0.0));
  const auto p0 = project(u, 0);
  double off = 0.0;
  for (std::size_t i = 1; i < p0.size(); ++i) off = std::max(off, std::abs(p0[i]));
  t.checks.push_back(exact("project(u, 0) keeps only the mean", off + std::abs(p0[0] - u[0]), 0.0));
  t.checks.push_back(exact("project(project(u, 5), 3) = project(u, 3)", detail::coeff_gap(project(project(u, 5), 3), project(u, 3)), 0.0));
  t.checks.push_back(exact("project idempotent", detail::coeff_gap(project(project(u, 4), 4), project(u, 4)), 0.0));
  const auto tiled = dyadic_block(u, 1) + dyadic_block(u, 2) + dyadic_block(u, 3);
  t.checks.push_back(exact("sum of blocks 1..3 = project(u, 8)", detail::coeff_gap(tiled, project(u, 8)), 0.0));
  const auto small = sample_field(build_lattice(2, 2), opt.seed, 1);
  t.checks.push_back(exact("block 1 of a cutoff-2 field is the field", detail::coeff_gap(dyadic_block(small, 1), small), 0.0));
  double overlap = 0.0;
  for (int j = 1; j <= 3; ++j)
    for (int k = j + 1; k <= 3; ++k) {
      const auto a = dyadic_block(u, j);
      const auto b = dyadic_block(u, k);
      for (std::size_t i = 0; i < a.size(); ++i) overlap = std::max(overlap, std::abs(a[i] * b[i]));
    }
  t.checks.push_back(exact("distinct blocks have disjoint support", overlap, 0.0));
  t.checks.push_back(exact("smooth(u, 0) = u", detail::coeff_gap(smooth(u, 0.0), u), 0.0));
  double herm = 0.0;
  for (std::uint64_t s = 0; s < 16; ++s) herm = std::max(herm, sample_field(lat, opt.seed, s).hermitian_defect());
  t.checks.push_back(exact("Hermitian symmetry of samples", herm, 0.0));
  return t;
}

/// Coefficient-space and grid routes to the same integrals.
inline Table parseval_checks(const Options& opt = {}) {
  Table t{"parseval", {}};
  for (int d : {1, 2, 3}) {
    const int N = d == 3 ? 3 : 8;
    const auto lat = build_lattice(d, N);
    const auto u = sample_field(lat, opt.seed, 10 + static_cast<std::uint64_t>(d));
    const auto v = sample_field(lat, opt.seed, 20 + static_cast<std::uint64_t>(d));
    const auto gu = to_grid(u);
    const auto gv = to_grid(v);
    const std::string tag = "d=" + std::to_string(d) + " ";
    t.checks.push_back(relative(tag + "grid mean of u v vs coefficient sum", detail::grid_mean_product(gu, gv), inner_product(u, v), 1e-10));
    const auto sig = sigma(d, N);
    t.checks.push_back(relative(tag + "mass: grid mean of H2 vs coefficient route", detail::grid_mean_hermite(gu, 2, sig.sigma), renormalized_mass(u, sig), 1e-10));
    double weighted = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) weighted += lat->bracket_pow(i, -d) * std::norm(u[i]);
    t.checks.push_back(relative(tag + "||smooth(u, d/2)||^2 vs weighted sum", l2_norm2(smooth(u, 0.5 * d)), weighted, 1e-10));
    t.checks.push_back(relative(tag + "grid mean vs coeff(0)", gu.mean(), u[0].real(), 1e-12));
    t.checks.push_back(at_most(tag + "grid round trip, max coefficient error", detail::coeff_gap(from_grid(gu, lat), u) / std::sqrt(l2_norm2(u)), 1e-12));
  }
  return t;
}

/// Grid quadrature against coefficient-space convolution for quartics.
inline Table quadrature_checks(const Options& opt = {}) {
  Table t{"quadrature", {}};
  for (int N = 1; N <= 4; ++N) {
    const auto lat = build_lattice(1, N);
    const auto u = sample_field(lat, opt.seed, 100 + static_cast<std::uint64_t>(N));
    const auto g = to_grid(u);
    double q = 0.0;
    for (double v : g.values) q += v * v * v * v;
    q /= static_cast<double>(g.points());
    const std::string tag = "d=1 N=" + std::to_string(N) + " ";
    t.checks.push_back(relative(tag + "grid mean u^4 vs convolution sum", q, quartic_integral(u), 1e-10));
    const auto sig = sigma(1, N);
    const double conv = quartic_integral(u) - 6.0 * sig.sigma * l2_norm2(u) + 3.0 * sig.sigma * sig.sigma;
    t.checks.push_back(relative(tag + "R_N grid vs convolution route", interaction_rn(g, sig), conv, 1e-10));
  }
  for (int d : {1, 2}) {
    const int N = d == 1 ? 2 : 4;
    const auto lat = build_lattice(d, N);
    const auto y = to_grid(sample_field(lat, opt.seed, 200 + static_cast<std::uint64_t>(d)));
    const auto theta = to_grid(0.7 * sample_field(lat, opt.seed, 300 + static_cast<std::uint64_t>(d)));
    const auto sig = sigma(d, N);
    const auto expansion = shifted_expansion(y, theta, sig);
    t.checks.push_back(relative("d=" + std::to_string(d) + " shifted quartic vs five-term expansion", shifted_interaction(y, theta, sig), expansion.total(), 1e-10));
  }
  return t;
}

/// Cross-degree orthogonality and the degree-2 covariance formula at two points.
inline Table orthogonality_checks(const Options& opt = {}) {
  Table t{"orthogonality", {}};
  const int d = 1;
  const int N = 4;
  const std::uint64_t n = 100000;
  const auto lat = build_lattice(d, N);
  const auto sig = sigma(d, N);
  const std::array<double, 3> x{0.0, 0.0, 0.0};
  const std::array<double, 3> y{0.9, 0.0, 0.0};
  double cov = 0.0;
  for (std::size_t i = 0; i < lat->size(); ++i) cov += lat->bracket_pow(i, -d) * std::cos(lat->mode(i)[0] * (x[0] - y[0]));
  const auto pairs = map_streams<std::array<double, 3>>(n, opt.workers, [&](std::uint64_t s) {
    const auto u = sample_field(lat, opt.seed, s);
    const double a = point_value(u, x);
    const double b = point_value(u, y);
    return std::array<double, 3>{hermite(2, a, sig.sigma) * hermite(3, b, sig.sigma),
                                 hermite(2, a, sig.sigma) * hermite(2, b, sig.sigma),
                                 hermite(1, a, sig.sigma) * hermite(2, b, sig.sigma)};
  });
  std::vector<double> col(n);
  const char* names[] = {"E[H2(u(x)) H3(u(y))] = 0", "E[H2(u(x)) H2(u(y))] = 2 cov^2", "E[H1(u(x)) H2(u(y))] = 0"};
  const double expected[] = {0.0, 2.0 * cov * cov, 0.0};
  for (int k = 0; k < 3; ++k) {
    for (std::size_t s = 0; s < n; ++s) col[s] = pairs[s][static_cast<std::size_t>(k)];
    t.checks.push_back(within_se(names[k], summarize_values(col), expected[k], 4.0));
  }
  return t;
}

/// Wick-square and R_N second moments against exact lattice sums.
inline Table chaos_moment_checks(const Options& opt = {}) {
  Table t{"chaos-moments", {}};
  const std::uint64_t n = 100000;
  t.checks.push_back(relative("2 sum <n>^{-2d}, d=1 window (0,1], s=0", chaos_second_moment(1, {0, 1}, 0.0), 4.0, 1e-15));
  t.checks.push_back(relative("2 sum <n>^{-2d-4s}, d=1 window (0,1], s=1/2", chaos_second_moment(1, {0, 1}, 0.5), 3.0, 1e-15));
  for (auto [d, N] : {std::pair{1, 1}, std::pair{1, 4}, std::pair{2, 4}}) {
    const auto sig = sigma(d, N);
    const auto x2 = sample_functional(d, N, n, opt.seed, opt.workers, [&](const SpectralField& f) {
      const double m = renormalized_mass(f, sig);
      return m * m;
    });
    t.checks.push_back(within_se("E[(int :u^2:)^2] d=" + std::to_string(d) + " N=" + std::to_string(N),
                                 summarize_values(x2), chaos_second_moment(d, {0, N}, 0.0), 3.0));
  }
  {
    const auto w2 = sample_functional(1, 4, n, opt.seed, opt.workers, [](const SpectralField& f) {
      const double m = wick_square(f, {1, 4}, 0.5).value;
      return m * m;
    });
    t.checks.push_back(within_se("E[(int :(<D>^{-1/2} P_(1,4] u)^2:)^2] d=1", summarize_values(w2),
                                 chaos_second_moment(1, {1, 4}, 0.5), 3.0));
  }
  const double r1 = interaction_cross_moment(1, 1, 1);
  t.checks.push_back(relative("E[R_1^2] d=1 lattice sum", r1, 204.0, 1e-12));
  {
    const auto sig = sigma(1, 1);
    const auto r2 = sample_functional(1, 1, n, opt.seed, opt.workers, [&](const SpectralField& f) {
      const double r = interaction_rn(to_grid(f), sig);
      return r * r;
    });
    t.checks.push_back(within_se("E[R_1^2] d=1 Monte Carlo", summarize_values(r2), r1, 3.0));
  }
  {
    const auto lat = build_lattice(2, 4);
    const std::size_t probe = lat->find({1, 0, 0});
    const auto sig = sigma(2, 4);
    const auto coeff = map_streams<std::array<double, 2>>(n, opt.workers, [&](std::uint64_t s) {
      const auto f = sample_field(lat, opt.seed, s);
      const double u0 = point_value(f, {0.3, 1.1, 0.0});
      return std::array<double, 2>{std::norm(f[probe]) / lat->bracket_pow(probe, -2.0), u0 * u0};
    });
    std::vector<double> a(n), b(n);
    for (std::size_t s = 0; s < n; ++s) {
      a[s] = coeff[s][0];
      b[s] = coeff[s][1];
    }
    t.checks.push_back(within_se("E|c(n)|^2 <n>^d at n=(1,0)", summarize_values(a), 1.0, 3.0));
    t.checks.push_back(within_se("E[u_N(x)^2] = sigma_N, d=2 N=4", summarize_values(b), sig.sigma, 3.0));
  }
  return t;
}

/// L^2 Cauchy table for R_N, d = 1, cutoffs {1, 2, 4}.
inline Table cauchy_checks(const Options& opt = {}) {
  Table t{"cauchy", {}};
  const auto table = cauchy_suite(1, {1, 2, 4}, 100000, opt.seed, opt.workers);
  for (const auto& row : table.consecutive)
    t.checks.push_back(within_se("E[(R_" + std::to_string(row.N) + " - R_" + std::to_string(row.M) + ")^2] consecutive",
                                 row.mc, row.analytic, 3.0));
  for (const auto& row : table.to_top) {
    if (row.M == row.N) {
      t.checks.push_back(exact("E[(R_" + std::to_string(row.N) + " - R_" + std::to_string(row.M) + ")^2] = 0", row.analytic, 0.0));
      continue;
    }
    t.checks.push_back(within_se("E[(R_" + std::to_string(row.N) + " - R_" + std::to_string(row.M) + ")^2]", row.mc, row.analytic, 3.0));
  }
  for (std::size_t i = 1; i < table.to_top.size(); ++i)
    t.checks.push_back(at_most("analytic E[(R_4 - R_M)^2] decreasing, M=" + std::to_string(table.to_top[i - 1].M) + " -> " +
                                   std::to_string(table.to_top[i].M),
                               table.to_top[i].analytic - table.to_top[i - 1].analytic, -1e-9));
  // M = 1, 2, 3 against N = 4, from the oracle alone.
  const double top = interaction_cross_moment(1, 4, 4);
  double previous = std::numeric_limits<double>::infinity();
  for (int M = 1; M <= 3; ++M) {
    const double gap = top - interaction_cross_moment(1, 4, M);
    t.checks.push_back(at_least("analytic E[(R_4 - R_" + std::to_string(M) + ")^2] positive", gap, 1e-9));
    if (M > 1) t.checks.push_back(at_most("analytic gap decreasing at M=" + std::to_string(M), gap - previous, -1e-9));
    previous = gap;
  }
  return t;
}

inline Table hypercontractivity_checks(const Options& opt = {}) {
  Table t{"hypercontractivity", {}};
  const auto h = hypercontractivity_check(2, 16, 100000, opt.seed, opt.workers);
  t.checks.push_back(at_most("||X||_4 / ||X||_2 for X = int :u_16^2: (d=2)", h.ratio, h.bound + kZ99 * h.ratio_stderr));
  const auto h1 = hypercontractivity_check(1, 8, 100000, opt.seed + 1, opt.workers);
  t.checks.push_back(at_most("||X||_4 / ||X||_2 for X = int :u_8^2: (d=1)", h1.ratio, h1.bound + kZ99 * h1.ratio_stderr));
  return t;
}

inline Table atom_checks(const Options& opt = {}) {
  Table t{"atoms", {}};
  const auto a = atom_check(2, 16, 0.0, 100000, opt.seed, opt.workers);
  t.checks.push_back(at_most("max CDF jump near K=0, d=2 N=16, 1e5 samples", a.max_jump, 1e-4));
  const auto b = atom_check(1, 0, 0.0, 10000, opt.seed, opt.workers);
  t.checks.push_back(at_most("max CDF jump near K=0, N=0 chi-square, 1e4 samples", b.max_jump, b.bound()));
  t.checks.push_back(exact("distinct values, d=2 N=16", static_cast<double>(a.distinct), static_cast<double>(a.nsamples)));
  return t;
}

/// Window around a continuum constant: [C / 1.25, 1.25 C].
inline constexpr double kAsymptoticWindow = 1.25;

/// Profile asymptotics over M in {16, 32, 64} and the exactness split of the
/// deterministic drift integrals.
inline Table fm_asymptotic_checks(const Options& = {}) {
  Table t{"fm-asymptotics", {}};
  const int d = 2;
  const double gamma = 0.05;
  const BumpProfile profile(d);
  const double s2_const = profile.radial_moment(-d);
  const double cost_const = profile.radial_moment(d);
  std::vector<double> ratios;
  for (int M : {16, 32, 64}) {
    const auto fM = build_fM(profile, d, M);
    const auto q = leo1_quantities(fM);
    const double vol = std::pow(static_cast<double>(M), d);
    const std::string tag = "M=" + std::to_string(M) + " ";
    t.checks.push_back(exact(tag + "mean of f_M", std::abs(fM[0]), 0.0));
    t.checks.push_back(in_window(tag + "int f_M^2", q.m2, 0.99, 1.01));
    ratios.push_back(q.m4 / vol);
    t.checks.push_back(in_window(tag + "s2 M^d", q.s2 * vol, s2_const / kAsymptoticWindow, s2_const * kAsymptoticWindow));
    const double KM = std::log(static_cast<double>(M));
    const auto drift = make_drift(profile, d, M, gamma, KM);
    t.checks.push_back(in_window(tag + "theta_cost / (gamma K_M M^d)", drift.theta_cost / (gamma * KM * vol),
                                 cost_const / kAsymptoticWindow, cost_const * kAsymptoticWindow));
    t.checks.push_back(relative(tag + "theta_cost coefficient vs grid", drift_cost_on_grid(drift), drift.theta_cost, 1e-10));
    const auto g = to_grid(fM);
    double m2_grid = 0.0;
    for (double v : g.values) m2_grid += v * v;
    t.checks.push_back(relative(tag + "int f_M^2 coefficient vs grid", m2_grid / static_cast<double>(g.points()), q.m2, 1e-10));
    t.checks.push_back(relative(tag + "int f_M^4 grid vs convolution", q.m4, quartic_integral(fM, 40000), 1e-10));
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  t.checks.push_back(at_most("m4/M^d relative variation over M in {16,32,64}", (*hi - *lo) / *lo, 0.10));
  return t;
}

/// Shifted cutoff event at d = 2, M = N = 32, K = log N, gamma = 0.05.
inline Table shifted_event_checks(const Options& opt = {}) {
  Table t{"shifted-event", {}};
  const int d = 2;
  const double gamma = 0.05;
  const BumpProfile profile(d);
  WitnessConfig wc;
  wc.d = d;
  wc.N = 32;
  wc.M = 32;
  wc.gamma = gamma;
  wc.K = std::log(32.0);
  wc.nsamples = 10000;
  wc.seed = opt.seed;
  wc.workers = opt.workers;
  const auto ev = shifted_event_probability(wc, profile);
  t.checks.push_back(at_least("shifted event probability, d=2 M=N=32 K=log N", ev.empirical.mean, 0.5));
  t.checks.push_back(at_least("shifted event probability vs 1 - Chebyshev (upper 99% CI)", ev.empirical.ci_high(), 1.0 - ev.chebyshev));
  return t;
}

/// Per-N means of the chaos diagnostics B1, B2.
struct DiagnosticSeries {
  std::vector<int> Ns;
  std::vector<EstimateRecord> b1;
  std::vector<EstimateRecord> b2;
};

/// Independent samples per N (seed offset by N) so that pairwise comparisons
/// use independent standard errors.
inline DiagnosticSeries diagnostic_series(int d, const std::vector<int>& Ns, std::uint64_t nsamples, const Options& opt) {
  DiagnosticSeries out;
  out.Ns = Ns;
  for (int N : Ns) {
    const auto seed = opt.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(N);
    const auto lat = build_lattice(d, N);
    const auto values = map_streams<ChaosDiagnostics>(nsamples, opt.workers,
                                                      [&](std::uint64_t s) { return chaos_diagnostics(sample_field(lat, seed, s)); });
    std::vector<double> a(nsamples), b(nsamples);
    for (std::size_t s = 0; s < nsamples; ++s) {
      a[s] = values[s].b1;
      b[s] = values[s].b2;
    }
    out.b1.push_back(summarize_values(a));
    out.b2.push_back(summarize_values(b));
  }
  return out;
}

/// For every pair N_i < N_j: mean_j - mean_i <= z99 sqrt(se_i^2 + se_j^2).
inline void add_trend_checks(Table& t, const std::string& label, const std::vector<int>& Ns, const std::vector<EstimateRecord>& r) {
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j)
      t.checks.push_back(at_most("E[" + label + "] rise N=" + std::to_string(Ns[i]) + " -> " + std::to_string(Ns[j]),
                                 r[j].mean - r[i].mean, kZ99 * std::hypot(r[i].standard_error, r[j].standard_error)));
}

inline Table diagnostics_checks(const Options& opt = {}) {
  Table t{"diagnostics", {}};
  {
    const auto lat = build_lattice(2, 1);
    const auto u = sample_field(lat, opt.seed, 7);
    t.checks.push_back(relative("N=1: B2 = |int :Y_1^2:|", chaos_diagnostics(u).b2, std::abs(renormalized_mass(u, sigma(2, 1))), 1e-12));
    const auto zero = SpectralField::zeros(build_lattice(2, 8));
    const auto z = chaos_diagnostics(zero);
    // Blocks tile the ball |n| <= 8, so the block variances add up to sigma_8.
    t.checks.push_back(relative("zero input: B2 = sum of block variances = sigma_8", z.b2, sigma(2, 8).sigma, 1e-12));
  }
  const std::vector<int> Ns{8, 16, 32, 64};
  const auto series = diagnostic_series(2, Ns, 10000, opt);
  add_trend_checks(t, "B1", Ns, series.b1);
  add_trend_checks(t, "B2", Ns, series.b2);
  return t;
}

/// Suite name to runner.
inline const std::map<std::string, std::function<Table(const Options&)>>& suites() {
  static const std::map<std::string, std::function<Table(const Options&)>> table{
      {"hermite", [](const Options& o) { return hermite_checks(o); }},
      {"orthogonality", [](const Options& o) { return orthogonality_checks(o); }},
      {"chaos-moments", [](const Options& o) { return chaos_moment_checks(o); }},
      {"quadrature",
       [](const Options& o) {
         auto t = quadrature_checks(o);
         t.append(parseval_checks(o)).append(algebra_checks(o));
         return t;
       }},
      {"cauchy", [](const Options& o) { return cauchy_checks(o); }},
      {"hypercontractivity", [](const Options& o) { return hypercontractivity_checks(o); }},
      {"atoms", [](const Options& o) { return atom_checks(o); }},
      {"fm-asymptotics",
       [](const Options& o) {
         auto t = fm_asymptotic_checks(o);
         t.append(shifted_event_checks(o));
         return t;
       }},
      {"diagnostics", [](const Options& o) { return diagnostics_checks(o); }},
  };
  return table;
}

inline std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : suites()) names.push_back(name);
  return names;
}

inline Table run(const std::string& name, const Options& opt = {}) {
  const auto& all = suites();
  const auto it = all.find(name);
  if (it == all.end()) throw std::invalid_argument("unknown verify suite '" + name + "'");
  auto table = it->second(opt);
  table.suite = name;
  return table;
}

}  // namespace loglab::verify

#endif  // LOGLAB_VERIFY_HPP
