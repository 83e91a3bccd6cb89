#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilw/analysis.hpp"
#include "ilw/hierarchy.hpp"
#include "ilw/measures.hpp"

namespace {

using namespace ilw;
using sym::Regime;

TEST(Philox, KnownAnswers) {
  const Philox4x32 zero(0);
  EXPECT_EQ(zero({0, 0, 0, 0}), (Philox4x32::Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  const Philox4x32 ones(0xffffffffffffffffULL);
  EXPECT_EQ(ones({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}),
            (Philox4x32::Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Sampling, GaussianMomentsAreStandard) {
  std::vector<double> re, re2;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const cplx g = complex_gaussian(7, i, 1);
    re.push_back(g.real());
    re2.push_back(std::norm(g));
  }
  const McEstimate m = mean_estimate(re), v = mean_estimate(re2);
  EXPECT_LT(std::abs(m.estimate), 4 * m.std_error);
  EXPECT_LT(std::abs(v.estimate - 2.0), 4 * v.std_error);
}

TEST(Sampling, DeterministicAndNestedInCutoff) {
  const GaussianSpec spec{Regime::Deep, 2, 2.0};
  const SpectralField a = sample(spec, 16, 42, 3), b = sample(spec, 16, 42, 3), c = sample(spec, 64, 42, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(c.truncated(16), a);
  EXPECT_NE(sample(spec, 16, 42, 4), a);
  EXPECT_NE(sample(spec, 16, 43, 3), a);
}

SpectralField single_mode(long n) {
  std::map<long, cplx> m{{n, {1.0, 0.0}}};
  return SpectralField::synthesize(m);
}

// Quadratic part of the conserved energy on a unit single mode is T(n).
TEST(Variance, MatchesEnergyQuadraticPart) {
  const std::vector<GaussianSpec> specs{{Regime::Deep, 2, 1.5}, {Regime::Deep, 3, 0.7}, {Regime::Deep, 3, kInfiniteDepth},
                                        {Regime::BO, 4, 0.0},   {Regime::Shallow, 3, 0.4}, {Regime::Shallow, 4, 0.4},
                                        {Regime::KdV, 3, 0.0},  {Regime::Shallow, 2, 0.0}};
  for (const auto& spec : specs) {
    const sym::CompiledDensity q(conserved_energy(spec).degree_part(2));
    sym::EvalParams p;
    if ((spec.regime == Regime::Deep && std::isfinite(spec.delta)) || (spec.regime == Regime::Shallow && spec.delta > 0.0))
      p.delta = spec.delta;
    for (long n : {1L, 2L, 5L}) {
      const double t = T_multiplier(spec, n);
      EXPECT_NEAR(q.evaluate(single_mode(n), p), t, 1e-7 * t) << describe(spec) << " n=" << n;
    }
  }
}

TEST(Variance, ShallowEvenCollapsesToKdv) {
  const double t = T_multiplier({Regime::Shallow, 4, 1e-4}, 3);
  EXPECT_NEAR(t / 81.0, 1.0, 1e-4);
  EXPECT_DOUBLE_EQ(T_multiplier({Regime::Shallow, 4, 0.0}, 3), 81.0);
  EXPECT_DOUBLE_EQ(T_multiplier({Regime::KdV, 3, 0.0}, 3), 81.0);
}

TEST(Variance, ShallowOddCollapsesToKdv) {
  const double t = T_multiplier({Regime::Shallow, 3, 1e-4}, 3);
  EXPECT_NEAR(t / 81.0, 1.0, 1e-4);
}

TEST(Variance, ShallowEvenDominatesKdv) {
  for (int kappa : {1, 2, 3})
    for (double delta : {0.1, 1.0, 5.0})
      for (long n : {1L, 4L, 50L}) EXPECT_GE(T_multiplier({Regime::Shallow, 2 * kappa, delta}, n), std::pow(static_cast<double>(n), 2 * kappa));
}

TEST(Variance, DeepSandwich) {
  for (int k : {2, 3, 4})
    for (double delta : {0.5, 2.0, 50.0})
      for (long n : {1L, 10L, 1000L}) {
        const double gap = deep_gap(k, delta, n);
        const double direct = std::pow(static_cast<double>(n), k) - T_multiplier({Regime::Deep, k, delta}, n);
        EXPECT_GE(gap, 0.0);
        EXPECT_NEAR(gap, direct, 1e-9 * std::pow(static_cast<double>(n), k) + 1e-12);
      }
}

TEST(Variance, Validation) {
  EXPECT_THROW(validate({Regime::Shallow, 3, 0.0}), MeasureError);
  EXPECT_THROW(validate({Regime::Deep, 2, 0.0}), MeasureError);
  EXPECT_THROW(validate({Regime::Deep, 0, 1.0}), MeasureError);
  EXPECT_NO_THROW(validate({Regime::Shallow, 4, 0.0}));
  EXPECT_EQ(to_json(GaussianSpec{Regime::Deep, 2, 2.0})["k"], 2);
}

TEST(Sobolev, MonteCarloMatchesAnalyticSum) {
  const GaussianSpec spec{Regime::Deep, 2, 2.0};
  const McEstimate mc = sobolev_square_mc(spec, 0.25, 32, 4000, 9);
  EXPECT_LT(std::abs(mc.estimate - expected_sobolev_square(spec, 0.25, 32)), 4 * mc.std_error);
  EXPECT_EQ(mc.samples, 4000);
}

// At the critical regularity s = (k−1)/2 the second moment grows like log N.
TEST(Sobolev, CriticalMomentDivergesLogarithmically) {
  const GaussianSpec spec{Regime::Deep, 3, 2.0};
  const double a = expected_sobolev_square(spec, 1.0, 1000), b = expected_sobolev_square(spec, 1.0, 10000),
               c = expected_sobolev_square(spec, 1.0, 100000);
  EXPECT_NEAR((c - b) / (b - a), 1.0, 1e-2);
  EXPECT_NEAR((c - b) / std::log(10.0), 4.0, 0.05);
  const double sub = expected_sobolev_square(spec, 0.75, 100000) - expected_sobolev_square(spec, 0.75, 10000);
  EXPECT_LT(sub, 0.1);
}

TEST(Cutoff, EtaShape) {
  EXPECT_EQ(cutoff_eta(0.5, CutoffShape::Smooth), 1.0);
  EXPECT_EQ(cutoff_eta(2.5, CutoffShape::Smooth), 0.0);
  EXPECT_NEAR(cutoff_eta(1.5, CutoffShape::Smooth), 0.5, 1e-15);
  EXPECT_GT(cutoff_eta(1.2, CutoffShape::Smooth), cutoff_eta(1.8, CutoffShape::Smooth));
  EXPECT_EQ(cutoff_eta(1.01, CutoffShape::Sharp), 0.0);
  EXPECT_THROW((void)cutoff_eta(-1.0, CutoffShape::Smooth), MeasureError);
}

TEST(Gibbs, WeightOfZeroFieldAndLargeFields) {
  const GaussianSpec spec{Regime::Deep, 3, 2.0};
  GibbsParams gp;
  gp.N = 8;
  gp.K = 1.0;
  const GibbsWeight w(spec, gp);
  EXPECT_DOUBLE_EQ(w(SpectralField::zero(8)), 1.0);
  EXPECT_EQ(w(single_mode(2) * 2.5), 0.0);
  EXPECT_EQ(w.log_weight(single_mode(2) * 2.5), -std::numeric_limits<double>::infinity());
  // Only P_N u enters.
  const SpectralField u = single_mode(1) * 0.3;
  EXPECT_DOUBLE_EQ(w(u), w(u + single_mode(9) * 0.5));
  EXPECT_DOUBLE_EQ(w(u), gibbs_density(spec, u, gp));
  EXPECT_THROW(GibbsWeight({Regime::Deep, 1, 2.0}, gp), MeasureError);
}

// E_μ[F_N^p] with common random numbers across N stays put as N grows.
TEST(Gibbs, WeightMomentsAreStableInN) {
  const GaussianSpec spec{Regime::Deep, 3, 2.0};
  std::vector<double> means;
  for (long N : {32L, 64L, 128L}) {
    const GibbsWeight w(spec, {N, 1.0, CutoffShape::Smooth, 0.5});
    std::vector<double> f;
    for (std::uint64_t i = 0; i < 2000; ++i) f.push_back(std::pow(w(sample(spec, N, 21, i)), 2.0));
    means.push_back(mean_estimate(f).estimate);
  }
  EXPECT_GT(means.front(), 0.0);
  EXPECT_NEAR(means[2] / means[1], 1.0, 0.1);
  EXPECT_NEAR(means[1] / means[0], 1.0, 0.2);
}

TEST(Gibbs, InteractionConvergesInN) {
  const GaussianSpec spec{Regime::Deep, 3, 2.0};
  std::vector<double> spread;
  for (long N : {8L, 16L, 32L}) {
    const GibbsWeight lo(spec, {N, 1.0, CutoffShape::Smooth, 0.5}), hi(spec, {2 * N, 1.0, CutoffShape::Smooth, 0.5});
    std::vector<double> sq;
    for (std::uint64_t i = 0; i < 400; ++i) {
      const SpectralField u = sample(spec, 2 * N, 4, i);
      sq.push_back(std::pow(hi.interaction(u) - lo.interaction(u), 2.0));
    }
    spread.push_back(mean_estimate(sq).estimate);
  }
  EXPECT_LT(spread[1], spread[0]);
  EXPECT_LT(spread[2], spread[1]);
  EXPECT_GT(-std::log(spread[2] / spread[0]) / std::log(4.0), 0.1);  // fitted rate θ
}

TEST(Kakutani, IdenticalMeasuresGiveZero) {
  const GaussianSpec a{Regime::Deep, 2, 3.0};
  for (double s : kakutani_partial_sums(a, a, 100)) EXPECT_EQ(s, 0.0);
}

TEST(Kakutani, PartialSumsAreMonotone) {
  const auto s = kakutani_partial_sums({Regime::Shallow, 3, 0.5}, {Regime::Shallow, 3, 1.0}, 1000);
  ASSERT_EQ(s.size(), 1000u);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i], s[i - 1]);
}

TEST(Kakutani, ClassifierOnSyntheticSequences) {
  std::vector<double> linear, saturating;
  for (int m = 1; m <= 10000; ++m) {
    linear.push_back(m);
    saturating.push_back(1.0 - 1.0 / (m * static_cast<double>(m)));
  }
  const SlopeClassifier c{0.1, 10.0};
  EXPECT_TRUE(classify(linear, c).growing);
  EXPECT_NEAR(classify(linear, c).slope, 1.0, 1e-6);
  EXPECT_FALSE(classify(saturating, c).growing);
}

TEST(Kl, PhiIsNonnegativeAndSmoothAtOne) {
  EXPECT_EQ(kl_phi(1.0), 0.0);
  for (double t : {0.5, 0.999999, 1.0000001, 3.0}) EXPECT_GE(kl_phi(t), 0.0);
  EXPECT_NEAR(kl_phi(1.0 + 1e-5), 0.5e-10 - 1e-15 / 3.0, 1e-20);
  EXPECT_NEAR(kl_phi(2.0), 1.0 - std::log(2.0), 1e-15);
}

// One mode: KL(μ_A‖μ_B) = φ(T_B/T_A) equals E_A[log dμ_A/dμ_B].
TEST(Kl, PerModeMonteCarloCrossCheck) {
  const double ta = T_multiplier({Regime::Deep, 2, 1.0}, 1), tb = 1.0;
  std::vector<double> logs;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const double x = std::norm(complex_gaussian(3, i, 1)) / ta;
    logs.push_back(std::log(ta / tb) - 0.5 * (ta - tb) * x);
  }
  const McEstimate m = mean_estimate(logs);
  EXPECT_LT(std::abs(m.estimate - kl_phi(tb / ta)), 4 * m.std_error + 1e-12);
}

TEST(Kl, DeepDivergenceDecreasesInDepth) {
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {1.0, 4.0, 16.0}) {
    const KlResult r = kl_gaussian(2, delta);
    EXPECT_LT(r.value, prev);
    EXPECT_LT(r.remainder_bound, 1e-6 * r.value);
    prev = r.value;
  }
}

TEST(PairSum, TwoPairContributionCancels) {
  const SpectralField u = sample({Regime::Deep, 3, 2.0}, 12, 5, 0);
  const PairSum p = two_pair_sum(u, 12);
  EXPECT_GT(p.magnitude, 0.0);
  EXPECT_LT(std::abs(p.value), 1e-12 * p.magnitude);
}

// d/dt E(P_N Φ_N(t)u) at 0 against a centered difference of the truncated flow.
TEST(Asymptotic, DefectMatchesFiniteDifference) {
  const GaussianSpec spec{Regime::Deep, 3, 2.0};
  const long N = 8;
  const SpectralField u = sample(spec, 3 * N, 11, 0);
  const ConservationDefect defect(spec, N);
  const sym::CompiledDensity energy(conserved_energy(spec));
  const EvolutionSpec fs = flow_spec(spec, N);
  const double h = 1e-4;
  auto e_at = [&](double t) { return energy.evaluate(flow(fs, u.truncated(N), t, h / 8).truncated(N), {spec.delta}); };
  const double fd = (e_at(h) - e_at(-h)) / (2 * h);
  const double exact = defect(u);
  EXPECT_NEAR(fd, exact, 1e-5 * std::abs(exact) + 1e-9);
}

TEST(Asymptotic, SmallRunProducesAudits) {
  AsymptoticParams p;
  p.spec = {Regime::Deep, 3, 2.0};
  p.N = 8;
  p.samples = 50;
  p.audited = 2;
  const AsymptoticResult r = asymptotic_conservation(p);
  EXPECT_EQ(r.statistic.samples, 50);
  ASSERT_EQ(r.audits.size(), 2u);
  for (const auto& a : r.audits) EXPECT_LT(a.err_fine, a.err_coarse);
  EXPECT_LT(r.max_pair_ratio, 1e-12);
  EXPECT_TRUE(to_json(r).contains("audits"));
}

TEST(Invariance, SmallRunIsConsistent) {
  InvarianceParams p;
  p.spec = {Regime::Deep, 3, 2.0};
  p.gibbs.N = 8;
  p.gibbs.K = 0.75;
  p.samples = 400;
  p.t_final = 0.2;
  p.dt = 1e-3;
  const InvarianceResult r = invariance_test(p);
  EXPECT_EQ(r.battery.size(), 6u);
  EXPECT_GT(r.effective_samples, 10.0);
  EXPECT_LT(r.max_z, 5.0);
  for (const auto& o : r.battery) EXPECT_GT(o.combined_stderr, 0.0) << o.name;
}

}  // namespace
