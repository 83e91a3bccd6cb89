#include <gtest/gtest.h>

#include <cmath>

#include "ilw/evaluate.hpp"
#include "ilw/hierarchy.hpp"

namespace {

using namespace ilw;
using namespace ilw::sym;

const SpectralField kField = SpectralField::synthesize({{1, {0.3, 0.0}}, {2, {0.0, 0.1}}, {3, {-0.05, 0.02}}});

double integral_of_product(std::initializer_list<SpectralField> factors) {
  auto it = factors.begin();
  FullSpectrum acc = FullSpectrum::from_field(*it++);
  for (; it != factors.end(); ++it) acc = multiply_full(acc, FullSpectrum::from_field(*it));
  return integral(acc);
}

TEST(Evaluate, EnergyOneMatchesPhysicalComputation) {
  for (double delta : {0.5, 2.0, 10.0}) {
    const auto& u = kField;
    const auto gu = apply_multiplier(u, SymbolKind::g_delta(), delta);
    const auto gux = apply_multiplier(apply_multiplier(u, SymbolKind::dx()), SymbolKind::g_delta(), delta);
    const double h1 = sobolev_norm(u, 1.0), gh1 = sobolev_norm(gu, 1.0);
    const double expected = h1 * h1 / 8 + 3 * gh1 * gh1 / 8 + integral_of_product({u, u, u, u}) / 4 +
                            0.75 * integral_of_product({u, u, gux}) + integral_of_product({u, u, u}) / (4 * delta);
    EXPECT_NEAR(evaluate(energy_deep(2), u, {delta}), expected, 1e-13) << delta;
  }
}

TEST(Evaluate, QuadraticPartIsMultiplierSum) {
  const double delta = 1.5;
  double expected = 0.0;
  for (long n = 1; n <= 3; ++n) expected += k_delta(delta, n) * std::norm(kField[n]);
  EXPECT_NEAR(evaluate(energy_deep(1).degree_part(2), kField, {delta}), expected, 1e-14);
}

TEST(Evaluate, CompiledMatchesOneShot) {
  const Density e = energy_deep(4);
  const CompiledDensity c(e);
  EXPECT_TRUE(c.needs_delta());
  EXPECT_FALSE(c.needs_cutoff());
  EXPECT_EQ(c.max_degree(), 6);
  EXPECT_DOUBLE_EQ(c.evaluate(kField, {3.0}), evaluate(e, kField, {3.0}));
}

TEST(Evaluate, BoRequiresNoDepth) {
  EXPECT_NO_THROW((void)evaluate(energy_bo(3), kField));
  EXPECT_THROW((void)evaluate(energy_deep(2), kField), EvaluationError);
}

TEST(Evaluate, HighPassNeedsCutoff) {
  const Density u = Density::leaf(Regime::Deep);
  const Density d = u.multiply(u.block_op(BlockKind::HighPass)).integrate();
  EXPECT_THROW((void)evaluate(d, kField, {1.0}), EvaluationError);
  EXPECT_NEAR(evaluate(d, kField, {1.0, 2}), std::norm(kField[3]) * 2.0, 1e-15);
}

TEST(Evaluate, ShallowEnergyAtSmallDepthApproachesKdv) {
  const double kdv = evaluate(energy_kdv(2), kField);
  EXPECT_NEAR(evaluate(energy_shallow(4), kField, {1e-3}), kdv, 1e-3 * std::abs(kdv));
  EXPECT_NEAR(evaluate(energy_shallow(3), kField, {1e-3}), kdv, 1e-3 * std::abs(kdv));
}

}  // namespace
