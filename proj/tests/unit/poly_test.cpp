#include <gtest/gtest.h>

#include <stdexcept>

#include "ilw/poly.hpp"

namespace {

using namespace ilw::sym;

TEST(Poly, RatioIsCanonical) {
  EXPECT_EQ(ratio(6, -4), Rational(-3, 2));
  EXPECT_EQ(binomial(6, 2), 15);
  EXPECT_EQ(factorial(5), 120);
}

TEST(Poly, MonoExponents) {
  const Mono m = Mono::var(0, 2) * Mono::var(3);
  EXPECT_EQ(m.exp(0), 2u);
  EXPECT_EQ(m.exp(3), 1u);
  EXPECT_EQ(m.degree(), 3u);
  EXPECT_EQ(m.max_exp(), 2u);
  EXPECT_THROW((void)(Mono::var(1, 15) * Mono::var(1)), std::exception);
}

TEST(Poly, ArithmeticCancels) {
  const Poly a = Poly::linear(0b11);  // n0 + n1
  const Poly sq = a * a;
  EXPECT_EQ(sq.size(), 3u);
  EXPECT_TRUE((sq - sq).is_zero());
  EXPECT_EQ(sq.min_degree(), 2);
  EXPECT_EQ(sq.terms().at(Mono::var(0) * Mono::var(1)), 2);
}

TEST(Poly, HyperplaneReduction) {
  // n0 + n1 + n2 = 0, so n2 ↦ −n0 − n1 and the sum vanishes.
  EXPECT_TRUE(Poly::linear(0b111).reduced_on_hyperplane(3).is_zero());
  const Poly r = Poly::monomial(Mono::var(2)).reduced_on_hyperplane(3);
  EXPECT_EQ(r, Poly::linear(0b11) * Rational(-1));
}

TEST(Poly, SubstituteAndPermute) {
  const Poly p = Poly::monomial(Mono::var(0, 2));
  const Poly s = p.substitute_linear(0, 0b110);  // (n1 + n2)²
  EXPECT_EQ(s, Poly::linear(0b110) * Poly::linear(0b110));
  const std::vector<int> perm{1, 0};
  EXPECT_EQ(p.permuted(perm), Poly::monomial(Mono::var(1, 2)));
}

}  // namespace
