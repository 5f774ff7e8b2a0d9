#include <gtest/gtest.h>

#include <cmath>

#include "loglab/drift.hpp"
#include "loglab/partition.hpp"
#include "support/oracles.hpp"

using namespace loglab;

TEST(BumpProfile, SupportAndNormalization) {
  for (int d = 1; d <= 3; ++d) {
    const BumpProfile p(d);
    EXPECT_EQ(p(0.0), 0.0);
    EXPECT_EQ(p(0.25), 0.0);
    EXPECT_EQ(p(1.0), 0.0);
    EXPECT_EQ(p(1.5), 0.0);
    EXPECT_GT(p(0.625), 0.0);
    EXPECT_NEAR(p.radial_moment(0.0), 1.0, 1e-10);
  }
}

TEST(BuildFM, Examples) {
  const BumpProfile p(2);
  const auto f = build_fM(p, 2, 32);
  EXPECT_EQ(f[0], Complex{});
  EXPECT_LE(f.hermitian_defect(), 1e-12);
  const double m2 = l2_norm2(f);
  EXPECT_GE(m2, 0.99);
  EXPECT_LE(m2, 1.01);
  EXPECT_THROW(build_fM(p, 2, 3), std::invalid_argument);
  EXPECT_THROW(build_fM(p, 1, 8), std::invalid_argument);
}

TEST(Leo1, ExactnessSplit) {
  const BumpProfile p(1);
  const auto f = build_fM(p, 1, 12);
  const auto q = leo1_quantities(f);
  EXPECT_NEAR(q.m4, oracle::quartic_integral(f), 1e-10 * q.m4);
  double s2 = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s2 += std::norm(f[i]) / std::sqrt(1.0 + f.lattice().norm2(i));
  EXPECT_NEAR(q.s2, s2, 1e-12 * s2);
}

TEST(DriftCost, Examples) {
  const BumpProfile p(2);
  const auto zero = make_drift(p, 2, 16, 0.0, 3.0);
  EXPECT_EQ(drift_cost(zero), 0.0);
  const auto a = make_drift(p, 2, 16, 0.05, 3.0);
  const auto b = make_drift(p, 2, 16, 0.10, 3.0);
  EXPECT_EQ(drift_cost(b), 2.0 * drift_cost(a));
  EXPECT_NEAR(drift_cost_on_grid(a), drift_cost(a), 1e-10 * drift_cost(a));
  EXPECT_NEAR(l2_norm2(a.theta()), 0.05 * 3.0 * l2_norm2(a.fM), 1e-14);
}

TEST(Witness, ZeroDriftMatchesCappedEstimator) {
  const BumpProfile p(2);
  WitnessConfig w;
  w.d = 2;
  w.N = 8;
  w.M = 8;
  w.gamma = 0.0;
  w.lambda = 0.03;
  w.K = 3.0;
  w.L = 2.0;
  w.nsamples = 500;
  w.seed = 4;
  MCConfig m;
  m.d = 2;
  m.N = 8;
  m.lambda = w.lambda;
  m.K = w.K;
  m.L = w.L;
  m.nsamples = w.nsamples;
  m.seed = w.seed;
  const auto a = witness_lower_bound(w, p);
  const auto b = estimate_capped_interaction(m);
  EXPECT_EQ(a.sum, b.sum);
  EXPECT_EQ(a.sumsq, b.sumsq);
  EXPECT_EQ(a.mean, b.mean);
}

TEST(Witness, FrozenSampleClosedForm) {
  const BumpProfile p(2);
  WitnessConfig w;
  w.d = 2;
  w.N = 16;
  w.M = 16;
  w.gamma = 0.05;
  w.lambda = 0.4;
  w.K = 40.0;
  w.L = 1e9;
  const WitnessContext ctx(w, p);
  const auto zero = SpectralField::zeros(ctx.lattice());
  const auto q = leo1_quantities(ctx.drift().fM);
  const double closed = frozen_witness(ctx.drift(), q, ctx.wick_variance(), w.lambda, w.K, w.L);
  EXPECT_NEAR(ctx.integrand(zero).value, closed, 1e-9 * std::abs(closed));
  // Same with the event switched off.
  WitnessConfig tight = w;
  tight.K = 0.1;
  const WitnessContext off(tight, p);
  EXPECT_EQ(off.integrand(zero).value, -0.5 * off.drift().theta_cost);
  EXPECT_EQ(frozen_witness(off.drift(), q, off.wick_variance(), w.lambda, tight.K, w.L), -0.5 * off.drift().theta_cost);
}

TEST(Witness, FrequencySupport) {
  const BumpProfile p(2);
  WitnessConfig w;
  w.N = 20;
  w.M = 12;
  const WitnessContext ctx(w, p);
  const auto& theta = ctx.theta();
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta.lattice().norm2(i) > 12 * 12) EXPECT_EQ(theta[i], Complex{});
  const auto back = project(theta, 12);
  for (std::size_t i = 0; i < theta.size(); ++i) EXPECT_EQ(back[i], theta[i]);
}

TEST(Witness, InvalidConfig) {
  const BumpProfile p(2);
  WitnessConfig w;
  w.M = 40;
  w.N = 32;
  EXPECT_THROW(witness_lower_bound(w, p), std::invalid_argument);
  w.M = 32;
  w.L = kInfinity;
  EXPECT_THROW(witness_lower_bound(w, p), std::invalid_argument);
}

TEST(Witness, VariationalDirection) {
  const BumpProfile p(2);
  for (double gamma : {0.0, 0.05, 0.3}) {
    WitnessConfig w;
    w.d = 2;
    w.N = 8;
    w.M = 8;
    w.gamma = gamma;
    w.lambda = 0.05;
    w.K = std::log(8.0);
    w.L = 4.0;
    w.nsamples = 4000;
    w.seed = 12;
    const auto lb = witness_lower_bound(w, p);
    MCConfig m;
    m.d = 2;
    m.N = 8;
    m.lambda = w.lambda;
    m.K = w.K;
    m.L = w.L;
    m.nsamples = w.nsamples;
    m.seed = w.seed;
    const auto z = estimate_capped_exponential(m);
    // log(mean) has standard error about se / mean.
    const double margin = kZ99 * (lb.standard_error + z.standard_error / z.mean);
    EXPECT_LE(lb.mean - margin, std::log(z.mean)) << "gamma=" << gamma;
  }
}

TEST(ShiftedEvent, ZeroDriftWideCutoff) {
  const BumpProfile p(2);
  WitnessConfig w;
  w.d = 2;
  w.N = 8;
  w.M = 8;
  w.gamma = 0.0;
  w.K = 50.0;
  w.nsamples = 2000;
  const auto e = shifted_event_probability(w, p);
  EXPECT_GE(e.empirical.mean, 0.999);
  EXPECT_GE(e.empirical.ci_high(), 1.0 - e.chebyshev);
  EXPECT_EQ(e.drift_mass_sq, 0.0);
  EXPECT_NEAR(e.wick_variance, chaos_second_moment(2, {0, 8}, 0.0), 0.0);
}
