#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "ilw/dynamics.hpp"
#include "ilw/hierarchy.hpp"

namespace {

using namespace ilw;

const SpectralField kField = SpectralField::synthesize({{1, {0.3, 0.0}}, {2, {0.0, 0.1}}, {3, {0.04, -0.02}}});

double max_rel_drift(const EvolutionSpec& spec, const sym::Density& e, double t, double dt, std::optional<long> project = {}) {
  IntegratorParams p;
  p.dt = dt;
  p.t_final = t;
  const Trajectory tr = evolve(spec, kField, p);
  return conservation_report(tr, {{"e", e}}, {spec.delta}, project).front().max_rel_drift;
}

TEST(Dynamics, LinearFlowIsAPhaseRotation) {
  EvolutionSpec spec{Dispersion::ILW, 2.0, std::nullopt, 8, false};
  const SpectralField v = flow(spec, kField, 0.7, 0.01);
  for (long n = 1; n <= 3; ++n) {
    const cplx expected = std::exp(linear_symbol(spec, n) * 0.7) * kField[n];
    EXPECT_NEAR(std::abs(v[n] - expected), 0.0, 1e-14);
  }
}

TEST(Dynamics, NonlinearTermMatchesConvolution) {
  EvolutionSpec spec{Dispersion::BO, 1.0, std::nullopt, 8, true};
  const SpectralField nl = nonlinear_term(spec, kField);
  const SpectralField sq = multiply(kField, kField).padded(8);
  for (long n = 1; n <= 8; ++n) EXPECT_NEAR(std::abs(nl[n] - cplx(0.0, n) * sq[n]), 0.0, 1e-14);
}

TEST(Dynamics, TruncatedNonlinearityStaysInBand) {
  EvolutionSpec spec{Dispersion::ILW, 2.0, 2L, 8, true};
  const SpectralField nl = nonlinear_term(spec, kField);
  EXPECT_NE(nl[2], cplx{});
  for (long n = 3; n <= 8; ++n) EXPECT_EQ(nl[n], cplx{});
}

TEST(Dynamics, IlwConservesItsEnergies) {
  EvolutionSpec spec{Dispersion::ILW, 2.0, std::nullopt, 64, true};
  for (int k = 0; k <= 3; ++k) EXPECT_LT(max_rel_drift(spec, sym::energy_deep(k), 0.2, 1e-3), 1e-9) << k;
}

TEST(Dynamics, LimitFamiliesConserveTheirEnergies) {
  EXPECT_LT(max_rel_drift({Dispersion::BO, 1.0, std::nullopt, 64, true}, sym::energy_bo(2), 0.2, 1e-3), 1e-9);
  EXPECT_LT(max_rel_drift({Dispersion::KdV, 1.0, std::nullopt, 32, true}, sym::energy_kdv(2), 0.2, 1e-4), 1e-9);
  EXPECT_LT(max_rel_drift({Dispersion::ScaledILW, 0.5, std::nullopt, 32, true}, sym::energy_shallow(3), 0.2, 1e-4), 1e-9);
}

TEST(Dynamics, TruncatedFlowConservesOnlyTheLowLaws) {
  EvolutionSpec spec{Dispersion::ILW, 2.0, 4L, 64, true};
  EXPECT_LT(max_rel_drift(spec, sym::energy_deep(0), 1.0, 1e-3, 4L), 1e-10);
  EXPECT_LT(max_rel_drift(spec, sym::energy_deep(1), 1.0, 1e-3, 4L), 1e-10);
  EXPECT_GT(max_rel_drift(spec, sym::energy_deep(2), 1.0, 1e-3, 4L), 1e-4);
}

TEST(Dynamics, BackwardFlowInvertsForwardFlow) {
  EvolutionSpec spec{Dispersion::ILW, 1.0, std::nullopt, 32, true};
  const SpectralField there = flow(spec, kField, 0.5, 1e-3);
  const SpectralField back = flow(spec, there, -0.5, 1e-3);
  for (long n = 1; n <= 32; ++n) EXPECT_NEAR(std::abs(back[n] - kField[n]), 0.0, 1e-10);
}

TEST(Dynamics, StepIsFourthOrder) {
  EvolutionSpec spec{Dispersion::ILW, 2.0, std::nullopt, 16, true};
  const SpectralField ref = flow(spec, kField, 0.5, 1e-4);
  auto err = [&](double dt) { return sobolev_norm(flow(spec, kField, 0.5, dt) - ref, 0.0); };
  const double ratio = err(0.05) / err(0.025);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

double sup_distance(const EvolutionSpec& a, const EvolutionSpec& b, const SpectralField& u0, double s) {
  IntegratorParams p;
  p.dt = 1e-3;
  p.t_final = 1.0;
  p.record_stride = 50;
  const Trajectory ta = evolve(a, u0, p), tb = evolve(b, u0, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < ta.states.size(); ++i) worst = std::max(worst, sobolev_norm(ta.states[i] - tb.states[i], s, false));
  return worst;
}

TEST(Dynamics, DeepFlowsApproachBenjaminOno) {
  const EvolutionSpec bo{Dispersion::BO, 1.0, std::nullopt, 32, true};
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {8.0, 32.0, 128.0}) {
    const double d = sup_distance({Dispersion::ILW, delta, std::nullopt, 32, true}, bo, kField, 1.0);
    EXPECT_LT(d, prev) << delta;
    prev = d;
  }
}

TEST(Dynamics, ShallowFlowsApproachKdv) {
  const EvolutionSpec kdv{Dispersion::KdV, 1.0, std::nullopt, 32, true};
  double prev = std::numeric_limits<double>::infinity();
  for (double delta : {0.5, 0.1, 0.02}) {
    const double d = sup_distance({Dispersion::ScaledILW, delta, std::nullopt, 32, true}, kdv, kField, 1.0);
    EXPECT_LT(d, prev) << delta;
    prev = d;
  }
}

TEST(Dynamics, TruncatedFlowApproachesFullFlow) {
  const EvolutionSpec full{Dispersion::ILW, 2.0, std::nullopt, 64, true};
  double prev = std::numeric_limits<double>::infinity();
  for (long n : {4L, 8L, 16L}) {
    const double d = sup_distance({Dispersion::ILW, 2.0, n, 64, true}, full, kField, 0.5);
    EXPECT_LT(d, prev) << n;
    prev = d;
  }
}

TEST(Dynamics, EnergiesAreResolved) {
  IntegratorParams p;
  p.dt = 1e-3;
  p.t_final = 0.5;
  const sym::CompiledDensity e(sym::energy_deep(2));
  const auto coarse = evolve({Dispersion::ILW, 2.0, std::nullopt, 32, true}, kField, p).states.back();
  const auto fine = evolve({Dispersion::ILW, 2.0, std::nullopt, 64, true}, kField, p).states.back();
  EXPECT_LT(std::abs(e.evaluate(coarse, {2.0}) - e.evaluate(fine, {2.0})), 1e-10);
}

TEST(Dynamics, OutputsRecordEveryStride) {
  EvolutionSpec spec{Dispersion::BO, 1.0, std::nullopt, 8, true};
  IntegratorParams p;
  p.dt = 0.01;
  p.t_final = 0.1;
  p.record_stride = 5;
  const Trajectory tr = evolve(spec, kField, p);
  ASSERT_EQ(tr.times.size(), 3u);
  EXPECT_NEAR(tr.times.back(), 0.1, 1e-15);
  const std::string csv = trajectory_csv(tr, {1}, {{"mass", sym::energy_bo(0)}}, {});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,re_1,im_1,mass");
  const auto j = trajectory_json(tr);
  EXPECT_EQ(j["scheme"], "IFRK4");
  EXPECT_EQ(j["snapshots"].size(), 3u);
}

TEST(Dynamics, RejectsBadSpecs) {
  EXPECT_THROW((void)evolve({Dispersion::ILW, -1.0}, kField, {}), std::invalid_argument);
  EXPECT_THROW((void)evolve({Dispersion::ILW, 1.0, 0L}, kField, {}), std::invalid_argument);
  EXPECT_THROW((void)family_from_string("nls"), std::invalid_argument);
  EXPECT_EQ(family_from_string(to_string(Dispersion::ScaledILW)), Dispersion::ScaledILW);
}

TEST(Dynamics, BlowupIsReported) {
  EvolutionSpec spec{Dispersion::KdV, 1.0, std::nullopt, 64, true};
  IntegratorParams p;
  p.dt = 0.5;
  p.t_final = 50.0;
  EXPECT_THROW((void)evolve(spec, kField * 20.0, p), EvolutionError);
}

}  // namespace
