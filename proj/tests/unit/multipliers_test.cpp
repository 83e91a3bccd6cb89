#include <gtest/gtest.h>

#include <cmath>

#include "ilw/multipliers.hpp"

namespace {

using ilw::SymbolKind;

TEST(Multipliers, CothMinusInverseMatchesDirectFormulaAwayFromZero) {
  for (double x : {0.5, 1.0, 3.0, 20.0, -2.0}) EXPECT_NEAR(ilw::coth_minus_inverse(x), 1.0 / std::tanh(x) - 1.0 / x, 1e-14);
}

TEST(Multipliers, CothMinusInverseTaylorBranchIsSmooth) {
  for (double x : {1e-8, 1e-4, 1e-2}) EXPECT_NEAR(ilw::coth_minus_inverse(x) / x, 1.0 / 3.0 - x * x / 45.0, 1e-10);
  EXPECT_EQ(ilw::coth_minus_inverse(0.0), 0.0);
  EXPECT_DOUBLE_EQ(ilw::coth_minus_inverse(-0.3), -ilw::coth_minus_inverse(0.3));
}

TEST(Multipliers, CothStableSaturates) {
  EXPECT_DOUBLE_EQ(ilw::coth_stable(800.0), 1.0);
  EXPECT_DOUBLE_EQ(ilw::coth_stable(-800.0), -1.0);
}

TEST(Multipliers, GdeltaAgreesWithPartialFractions) {
  for (double delta : {0.3, 1.0, 4.0})
    for (long n : {1L, 2L, 7L, -3L}) {
      const auto direct = ilw::symbol(SymbolKind::g_delta(), delta, n);
      const auto series = ilw::series_oracle(ilw::SeriesKind::Gdelta, delta, n, 2'000'000);
      EXPECT_NEAR(direct.imag(), series.imag(), 1e-6 * std::abs(delta * n)) << delta << " " << n;
      EXPECT_EQ(direct.real(), 0.0);
    }
}

TEST(Multipliers, LdeltaAndHfrakAgreeWithPartialFractions) {
  for (double delta : {0.1, 1.0, 3.0})
    for (long n : {1L, 5L}) {
      EXPECT_NEAR(ilw::l_delta(delta, n), ilw::series_oracle(ilw::SeriesKind::Ldelta, delta, n, 1'000'000).real(), 1e-6 * n * n);
      EXPECT_NEAR(ilw::h_frak(delta, n), ilw::series_oracle(ilw::SeriesKind::Hfrak, delta, n, 100'000).real(), 1e-9);
    }
}

TEST(Multipliers, DeepLimitIsHilbert) {
  for (long n : {1L, -4L}) {
    EXPECT_EQ(ilw::symbol(SymbolKind::g_delta(), ilw::kInfiniteDepth, n), ilw::symbol(SymbolKind::hilbert(), 1.0, n));
    EXPECT_DOUBLE_EQ(ilw::k_delta(ilw::kInfiniteDepth, n), std::abs(static_cast<double>(n)));
  }
  EXPECT_NEAR(ilw::k_delta(1e6, 3), 3.0 - 1e-6, 1e-12);
}

TEST(Multipliers, ShallowLimitIsThirdOfSquare) {
  EXPECT_DOUBLE_EQ(ilw::l_delta(0.0, 4), 16.0 / 3.0);
  EXPECT_NEAR(ilw::l_delta(1e-5, 4), 16.0 / 3.0, 1e-6);
  EXPECT_NEAR(ilw::q_tilde_real(1e-4, 2), 0.0, 1e-6);
}

TEST(Multipliers, QdeltaIsKMinusAbs) {
  EXPECT_NEAR(ilw::q_delta_real(2.0, 3), ilw::k_delta(2.0, 3) - 3.0, 1e-15);
  EXPECT_LT(ilw::q_delta_real(2.0, 3), 0.0);
}

TEST(Multipliers, ProjectorsAndDerivative) {
  EXPECT_EQ(ilw::symbol(SymbolKind::proj_low(3), 1.0, 3), 1.0);
  EXPECT_EQ(ilw::symbol(SymbolKind::proj_low(3), 1.0, 4), 0.0);
  EXPECT_EQ(ilw::symbol(SymbolKind::proj_high(3), 1.0, -4), 1.0);
  EXPECT_EQ(ilw::symbol(SymbolKind::dx(), 1.0, 2), std::complex<double>(0.0, 2.0));
  EXPECT_EQ(ilw::symbol(SymbolKind::dx_inv(), 1.0, 2), std::complex<double>(0.0, -0.5));
}

TEST(Multipliers, RejectsInvalidInput) {
  EXPECT_THROW(ilw::symbol(SymbolKind::hilbert(), 1.0, 0), ilw::SymbolError);
  EXPECT_THROW(ilw::symbol(SymbolKind::q_delta(), -1.0, 1), ilw::SymbolError);
  EXPECT_THROW(ilw::symbol(SymbolKind::tilbert(), ilw::kInfiniteDepth, 1), ilw::SymbolError);
  EXPECT_EQ(ilw::symbol_or_zero(SymbolKind::hilbert(), 1.0, 0), 0.0);
}

TEST(Multipliers, DispersionRelations) {
  EXPECT_DOUBLE_EQ(ilw::dispersion(ilw::Dispersion::BO, 1.0, -3), 3.0);
  EXPECT_NEAR(ilw::dispersion(ilw::Dispersion::ILW, 1e8, 3), 3.0, 1e-7);
}

}  // namespace
