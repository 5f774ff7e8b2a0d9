#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "loglab/errors.hpp"
#include "loglab/monte_carlo.hpp"
#include "loglab/spectral_field.hpp"
#include "support/oracles.hpp"

using namespace loglab;

TEST(Lattice, ModeCounts) {
  EXPECT_EQ(build_lattice(1, 1)->size(), 3u);
  EXPECT_EQ(build_lattice(2, 1)->size(), 5u);
  EXPECT_EQ(build_lattice(2, 2)->size(), 13u);
}

TEST(Lattice, CountMatchesEnumeration) {
  for (int d = 1; d <= 3; ++d)
    for (int N : {0, 1, 2, 5, 9}) {
      EXPECT_EQ(count_modes(d, N), oracle::ball(d, N).size()) << d << " " << N;
      EXPECT_EQ(build_lattice(d, N)->size(), oracle::ball(d, N).size());
    }
}

TEST(Lattice, OneDimensionalModes) {
  const auto lat = build_lattice(1, 1);
  std::set<int> seen;
  for (const auto& m : lat->modes()) seen.insert(m[0]);
  EXPECT_EQ(seen, (std::set<int>{-1, 0, 1}));
}

TEST(Lattice, ClosedUnderNegationAndOrdered) {
  const auto lat = build_lattice(2, 7);
  for (std::size_t i = 0; i < lat->size(); ++i) {
    const auto& n = lat->mode(i);
    const auto& m = lat->mode(lat->negation(i));
    EXPECT_EQ(m[0], -n[0]);
    EXPECT_EQ(m[1], -n[1]);
    if (i > 0) EXPECT_LE(lat->norm2(i - 1), lat->norm2(i));
  }
}

TEST(Lattice, SmallerCutoffIsPrefix) {
  const auto big = build_lattice(2, 10);
  const auto small = build_lattice(2, 6);
  for (std::size_t i = 0; i < small->size(); ++i) EXPECT_EQ(small->mode(i), big->mode(i));
  EXPECT_EQ(big->count_within(6), small->size());
}

TEST(Lattice, Errors) {
  EXPECT_THROW(build_lattice(0, 2), std::invalid_argument);
  EXPECT_THROW(build_lattice(4, 2), std::invalid_argument);
  try {
    build_lattice(3, 40, 1000);
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_EQ(e.cost(), static_cast<double>(count_modes(3, 40)));
    EXPECT_NE(std::string(e.what()).find(std::to_string(count_modes(3, 40))), std::string::npos);
  }
}

TEST(Sigma, Examples) {
  EXPECT_DOUBLE_EQ(sigma(1, 0).sigma, 1.0);
  EXPECT_NEAR(sigma(1, 1).sigma, 1.0 + std::numbers::sqrt2, 1e-14);
  // Four unit modes with <n>^{-2} = 1/2 each.
  EXPECT_NEAR(sigma(2, 1).sigma, 3.0, 1e-14);
}

TEST(Sigma, MatchesDirectSumOracle) {
  for (int d = 1; d <= 3; ++d)
    for (int N : {0, 1, 3, 8}) EXPECT_NEAR(sigma(d, N).sigma, oracle::sigma(d, N), 1e-12 * oracle::sigma(d, N));
}

TEST(Sigma, MonotoneAndLogarithmic) {
  for (int d = 1; d <= 2; ++d) {
    double prev = 0.0;
    for (int N = 0; N <= 40; ++N) {
      const double s = sigma(d, N).sigma;
      EXPECT_GE(s, prev);
      prev = s;
    }
    const double inc64 = sigma(d, 128).sigma - sigma(d, 64).sigma;
    const double inc128 = sigma(d, 256).sigma - sigma(d, 128).sigma;
    EXPECT_NEAR(inc128 / inc64, 1.0, 0.05) << "d=" << d;
  }
}

TEST(Sampler, HermitianExactly) {
  const auto lat = build_lattice(2, 9);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = sample_field(lat, 3, s);
    EXPECT_EQ(f.hermitian_defect(), 0.0);
    EXPECT_EQ(f[0].imag(), 0.0);
  }
}

TEST(Sampler, DeterministicAndNested) {
  const auto big = build_lattice(2, 12);
  const auto small = build_lattice(2, 5);
  const auto a = sample_field(big, 11, 4);
  const auto b = sample_field(big, 11, 4);
  const auto c = sample_field(small, 11, 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], a[i]);
}

TEST(Sampler, CoefficientNormalization) {
  const auto lat = build_lattice(2, 3);
  const std::size_t probe = lat->find({2, 1, 0});
  const int n = 100000;
  std::vector<double> v(n);
  const double scale = std::pow(1.0 + lat->norm2(probe), 1.0);
  for (int s = 0; s < n; ++s) v[static_cast<std::size_t>(s)] = std::norm(sample_field(lat, 8, static_cast<std::uint64_t>(s))[probe]) * scale;
  const auto r = summarize_values(v);
  EXPECT_NEAR(r.mean, 1.0, 3.0 * r.standard_error);
}

TEST(Sampler, PointwiseVarianceIsSigma) {
  const auto lat = build_lattice(1, 6);
  const int n = 100000;
  std::vector<double> v(n);
  for (int s = 0; s < n; ++s) {
    const double u = point_value(sample_field(lat, 9, static_cast<std::uint64_t>(s)), {0.4, 0, 0});
    v[static_cast<std::size_t>(s)] = u * u;
  }
  const auto r = summarize_values(v);
  EXPECT_NEAR(r.mean, sigma(1, 6).sigma, 3.0 * r.standard_error);
}

TEST(Projection, Examples) {
  const auto lat = build_lattice(2, 6);
  const auto u = sample_field(lat, 1, 0);
  const auto same = project(u, 6);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(same[i], u[i]);
  const auto c = project(u, 0);
  EXPECT_EQ(c[0], u[0]);
  for (std::size_t i = 1; i < u.size(); ++i) EXPECT_EQ(c[i], Complex{});
  const auto a = project(project(u, 4), 2);
  const auto b = project(u, 2);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_THROW(project(u, -1), std::invalid_argument);
}

TEST(Projection, Linear) {
  const auto lat = build_lattice(1, 5);
  const auto u = sample_field(lat, 1, 0);
  const auto v = sample_field(lat, 1, 1);
  const auto lhs = project(2.0 * u + v, 3);
  const auto rhs = 2.0 * project(u, 3) + project(v, 3);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(std::abs(lhs[i] - rhs[i]), 0.0, 1e-15);
}

TEST(Dyadic, BlocksTileTheBall) {
  const auto lat = build_lattice(2, 8);
  const auto u = sample_field(lat, 2, 0);
  const auto sum = dyadic_block(u, 1) + dyadic_block(u, 2) + dyadic_block(u, 3);
  const auto ref = project(u, 8);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(sum[i], ref[i]);
}

TEST(Dyadic, FirstBlockAndDisjointness) {
  const auto small = sample_field(build_lattice(1, 2), 2, 1);
  const auto b1 = dyadic_block(small, 1);
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(b1[i], small[i]);
  const auto u = sample_field(build_lattice(1, 16), 2, 2);
  for (int j = 1; j <= 4; ++j)
    for (int k = j + 1; k <= 4; ++k) {
      const auto a = dyadic_block(u, j);
      const auto b = dyadic_block(u, k);
      for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(a[i] * b[i], Complex{});
    }
  EXPECT_THROW(dyadic_block(u, 0), std::invalid_argument);
}

TEST(Smooth, Examples) {
  const auto lat = build_lattice(2, 5);
  const auto u = sample_field(lat, 4, 0);
  const auto same = smooth(u, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_EQ(same[i], u[i]);
  std::vector<Complex> c(lat->size());
  c[0] = 2.5;
  const SpectralField k(lat, c);
  EXPECT_EQ(smooth(k, 1.7)[0], Complex(2.5));
  double weighted = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) weighted += std::pow(1.0 + lat->norm2(i), -1.0) * std::norm(u[i]);
  EXPECT_NEAR(l2_norm2(smooth(u, 1.0)), weighted, 1e-13 * weighted);
  EXPECT_EQ(smooth(u, 0.8).hermitian_defect(), 0.0);
}

TEST(Grid, SizeRule) {
  EXPECT_EQ(grid_size_for(1), 5);
  EXPECT_EQ(grid_size_for(8), 35);
  EXPECT_EQ(grid_size_for(16), 70);
  EXPECT_EQ(grid_size_for(32), 135);
  for (int N = 0; N < 100; ++N) EXPECT_GE(grid_size_for(N), 4 * N + 1);
}

TEST(Grid, Examples) {
  const auto lat = build_lattice(2, 3);
  const auto zero = to_grid(SpectralField::zeros(lat));
  for (double v : zero.values) EXPECT_EQ(v, 0.0);
  std::vector<Complex> c(lat->size());
  const std::size_t i = lat->find({1, 2, 0});
  c[i] = 0.5;
  c[lat->negation(i)] = 0.5;
  const auto g = to_grid(SpectralField(lat, c));
  double sq = 0.0;
  for (int a = 0; a < g.G; ++a)
    for (int b = 0; b < g.G; ++b) {
      const double x = 2 * std::numbers::pi * a / g.G, y = 2 * std::numbers::pi * b / g.G;
      const double v = g.values[static_cast<std::size_t>(a * g.G + b)];
      EXPECT_NEAR(v, std::cos(x + 2 * y), 1e-14);
      sq += v * v;
    }
  EXPECT_NEAR(sq / static_cast<double>(g.points()), 0.5, 1e-14);
  EXPECT_THROW(to_grid(SpectralField::zeros(lat), 12), std::invalid_argument);
}

TEST(Grid, QuarticMatchesQuadrupleSum) {
  const auto lat = build_lattice(1, 1);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto u = sample_field(lat, 6, s);
    const auto g = to_grid(u);
    double q = 0.0;
    for (double v : g.values) q += v * v * v * v;
    q /= static_cast<double>(g.points());
    const double ref = oracle::quartic_integral(u);
    EXPECT_NEAR(q, ref, 1e-10 * std::abs(ref));
  }
}

TEST(Grid, MeanRoundTripAndPointValues) {
  for (int d = 1; d <= 3; ++d) {
    const int N = d == 3 ? 3 : 7;
    const auto lat = build_lattice(d, N);
    const auto u = sample_field(lat, 10, static_cast<std::uint64_t>(d));
    const auto g = to_grid(u);
    EXPECT_NEAR(g.mean(), u[0].real(), 1e-12 * std::max(1.0, std::abs(u[0].real())));
    const auto back = from_grid(g, lat);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(std::abs(back[i] - u[i]), 0.0, 1e-12 * std::sqrt(l2_norm2(u)));
    const double x = 2 * std::numbers::pi * 3 / g.G;
    std::array<double, 3> pt{x, d >= 2 ? x : 0.0, d >= 3 ? x : 0.0};
    std::size_t idx = 0;
    for (int c = 0; c < d; ++c) idx = idx * static_cast<std::size_t>(g.G) + 3;
    EXPECT_NEAR(g.values[idx], oracle::point_value(u, pt), 1e-12);
    EXPECT_NEAR(point_value(u, pt), oracle::point_value(u, pt), 1e-12);
  }
}

TEST(Grid, ParsevalTwoRoutes) {
  const auto lat = build_lattice(2, 8);
  const auto u = sample_field(lat, 12, 0);
  const auto v = sample_field(lat, 12, 1);
  const auto gu = to_grid(u), gv = to_grid(v);
  double m = 0.0;
  for (std::size_t k = 0; k < gu.points(); ++k) m += gu.values[k] * gv.values[k];
  m /= static_cast<double>(gu.points());
  EXPECT_NEAR(m, inner_product(u, v), 1e-10 * std::abs(inner_product(u, v)));
  const auto sum = add(gu, gv);
  const auto ref = to_grid(u + v);
  for (std::size_t k = 0; k < sum.points(); ++k) EXPECT_NEAR(sum.values[k], ref.values[k], 1e-12);
}
