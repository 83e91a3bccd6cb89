#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace ilw::sym {

using Rational = mpq_class;

// Frequency monomial Π n_i^{e_i} for up to 16 factors, 4 bits per exponent.
class Mono {
 public:
  static constexpr int kMaxVars = 16;
  static constexpr unsigned kMaxExp = 15;

  constexpr Mono() = default;
  static constexpr Mono from_bits(std::uint64_t bits) {
    Mono m;
    m.bits_ = bits;
    return m;
  }
  static Mono var(int i, unsigned e = 1);

  unsigned exp(int i) const { return static_cast<unsigned>((bits_ >> (4 * i)) & 0xFu); }
  Mono with_exp(int i, unsigned e) const;
  unsigned degree() const;
  unsigned max_exp() const;
  std::uint64_t bits() const { return bits_; }

  Mono operator*(Mono other) const;  // throws on exponent overflow
  Mono shifted(int offset) const { return from_bits(bits_ << (4 * offset)); }
  Mono permuted(std::span<const int> perm) const;  // exponent of i moves to perm[i]

  auto operator<=>(const Mono&) const = default;

 private:
  std::uint64_t bits_ = 0;
};

// Sparse polynomial with exact rational coefficients in the frequency variables.
class Poly {
 public:
  using Map = std::map<Mono, Rational>;

  Poly() = default;
  static Poly constant(const Rational& c);
  static Poly monomial(Mono m, const Rational& c = 1);
  // Σ_{i ∈ mask} n_i
  static Poly linear(std::uint32_t mask);

  bool is_zero() const { return terms_.empty(); }
  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(Mono m, const Rational& c);
  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(const Rational& c);
  Poly operator*(const Poly& other) const;
  Poly operator+(const Poly& other) const;
  Poly operator-(const Poly& other) const;
  Poly operator*(const Rational& c) const;
  bool operator==(const Poly& other) const { return terms_ == other.terms_; }

  Poly shifted(int offset) const;
  Poly permuted(std::span<const int> perm) const;
  // n_var -> Σ_{i∈mask} n_i
  Poly substitute_linear(int var, std::uint32_t mask, int sign = 1) const;
  // Eliminate n_{d-1} using Σ n_i = 0.
  Poly reduced_on_hyperplane(int d) const;

  // Degrees present (homogeneous polys have one).
  int min_degree() const;
  int max_degree() const;
  unsigned max_exponent() const;

  std::string to_string(int d) const;

 private:
  Map terms_;
};

// n/d in lowest terms (mpq_class(n, d) alone does not canonicalize).
Rational ratio(long n, long d);
Rational binomial(long n, long k);
Rational factorial(long n);

}  // namespace ilw::sym
