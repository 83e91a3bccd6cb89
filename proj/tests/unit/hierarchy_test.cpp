#include <gtest/gtest.h>

#include "ilw/analysis.hpp"
#include "ilw/hierarchy.hpp"
#include "ilw/present.hpp"

namespace {

using namespace ilw::sym;

// ∫u·G∂u, i.e. ‖G^{1/2}u‖² in Ḣ^{1/2}, and G∂u itself.
Density g_dx(const Density& f) { return f.hilbert_dx() + f.q_op(); }

Density hand_energy_half() {
  const Density u = Density::leaf(Regime::Deep);
  return u.multiply(g_dx(u)).integrate() * ratio(1, 2) + u.multiply(u).multiply(u).integrate() * ratio(1, 3);
}

Density hand_energy_one() {
  const Density u = Density::leaf(Regime::Deep);
  const Density ux = u.dx(), gux = g_dx(u), uu = u.multiply(u);
  Density e = ux.multiply(ux).integrate() * ratio(1, 8);
  e += gux.multiply(gux).integrate() * ratio(3, 8);
  e += uu.multiply(uu).integrate() * ratio(1, 4);
  e += uu.multiply(gux).integrate() * ratio(3, 4);
  e += uu.multiply(u).integrate().times_delta(-1) * ratio(1, 4);
  return e;
}

TEST(Hierarchy, FirstDeepEnergiesMatchHandDensities) {
  EXPECT_EQ(energy_deep(1), hand_energy_half()) << to_string(energy_deep(1));
  EXPECT_EQ(energy_deep(2), hand_energy_one()) << to_string(energy_deep(2));
}

TEST(Hierarchy, MassIsHalfSquare) {
  const Density u = Density::leaf(Regime::Deep);
  EXPECT_EQ(energy_deep(0), u.multiply(u).integrate() * ratio(1, 2));
}

TEST(Hierarchy, DeepWeightsSumToOne) {
  for (int k = 0; k <= 10; ++k) {
    Rational s = 0;
    for (int l = 0; l <= k; l += 2) s += a_coeff(k, l);
    EXPECT_EQ(s, 1) << "k = " << k;
  }
}

TEST(Hierarchy, DeepWeightsArePositive) {
  for (int k = 0; k <= 10; ++k)
    for (int l = 0; l <= k; l += 2) EXPECT_GT(a_coeff(k, l), 0) << k << "," << l;
}

TEST(Hierarchy, ShallowLeadingWeight) {
  for (int kappa = 1; kappa <= 4; ++kappa) EXPECT_EQ(a_tilde_coeff(2 * kappa - 1, 1), 3);
}

TEST(Hierarchy, DeltaFreePartsAreTheLimitEnergies) {
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(delta_free_part(energy_deep(k)), energy_bo(k)) << "k = " << k;
  for (int kappa = 1; kappa <= 3; ++kappa) {
    EXPECT_EQ(delta_free_part(energy_shallow(2 * kappa)), energy_kdv(kappa)) << "kappa = " << kappa;
  }
}

TEST(Hierarchy, EnergiesAreRankHomogeneous) {
  for (int k = 0; k <= 5; ++k) {
    EXPECT_TRUE(rank_violations(energy_deep(k)).empty()) << "deep " << k;
    EXPECT_TRUE(rank_violations(energy_shallow(k)).empty()) << "shallow " << k;
  }
}

TEST(Hierarchy, ShallowTablesRespectCounterBounds) {
  for (int n = 1; n <= 5; ++n) {
    EXPECT_TRUE(h_shallow_bound_violations(h_shallow(n), n).empty()) << n;
    EXPECT_TRUE(h_tilde_bound_violations(h_tilde(n).integrate(), n).empty()) << n;
  }
}

TEST(Hierarchy, DeepEnergiesSatisfyStructureBounds) {
  for (int k = 1; k <= 5; ++k) EXPECT_TRUE(deep_structure_violations(energy_deep(k), k).empty()) << k;
}

TEST(Hierarchy, InteractionPartHasDegreeAtLeastThree) {
  const Density r = interaction_part(energy_deep(3));
  ASSERT_FALSE(r.is_zero());
  for (const auto& [key, poly] : r.terms()) EXPECT_GE(key.degree, 3);
  EXPECT_EQ(r + energy_deep(3).degree_part(2), energy_deep(3));
}

TEST(Hierarchy, DegreeTruncationIsExact) {
  EXPECT_EQ(energy_deep(4, 3), energy_deep(4).max_degree_part(3));
}

TEST(Hierarchy, KdvOddLawsIntegrateToZero) {
  for (int n = 1; n <= 4; ++n) EXPECT_TRUE(h_kdv(2 * n + 1).integrate().is_zero()) << n;
}

}  // namespace
