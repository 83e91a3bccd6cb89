#include "ilw/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace ilw::sym {

Mono Mono::var(int i, unsigned e) { return Mono{}.with_exp(i, e); }

Mono Mono::with_exp(int i, unsigned e) const {
  if (e > kMaxExp || i < 0 || i >= kMaxVars) throw std::overflow_error("monomial exponent or variable out of range");
  const std::uint64_t mask = std::uint64_t{0xF} << (4 * i);
  return from_bits((bits_ & ~mask) | (std::uint64_t{e} << (4 * i)));
}

unsigned Mono::degree() const {
  unsigned d = 0;
  for (std::uint64_t b = bits_; b != 0; b >>= 4) d += static_cast<unsigned>(b & 0xFu);
  return d;
}

unsigned Mono::max_exp() const {
  unsigned d = 0;
  for (std::uint64_t b = bits_; b != 0; b >>= 4) d = std::max(d, static_cast<unsigned>(b & 0xFu));
  return d;
}

Mono Mono::operator*(Mono other) const {
  std::uint64_t out = 0;
  std::uint64_t a = bits_;
  std::uint64_t b = other.bits_;
  for (int i = 0; (a | b) != 0; ++i, a >>= 4, b >>= 4) {
    const std::uint64_t e = (a & 0xFu) + (b & 0xFu);
    if (e > kMaxExp) throw std::overflow_error("monomial exponent overflow");
    out |= e << (4 * i);
  }
  return from_bits(out);
}

Mono Mono::permuted(std::span<const int> perm) const {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const std::uint64_t e = (bits_ >> (4 * i)) & 0xFu;
    out |= e << (4 * perm[i]);
  }
  return from_bits(out);
}

Poly Poly::constant(const Rational& c) { return monomial(Mono{}, c); }

Poly Poly::monomial(Mono m, const Rational& c) {
  Poly p;
  p.add(m, c);
  return p;
}

Poly Poly::linear(std::uint32_t mask) {
  Poly p;
  for (int i = 0; i < Mono::kMaxVars; ++i) {
    if (mask & (1u << i)) p.add(Mono::var(i), 1);
  }
  return p;
}

void Poly::add(Mono m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& other) {
  for (const auto& [m, c] : other.terms_) add(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  for (const auto& [m, c] : other.terms_) add(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly Poly::operator*(const Poly& other) const {
  Poly out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) out.add(ma * mb, ca * cb);
  }
  return out;
}

Poly Poly::operator+(const Poly& other) const {
  Poly out = *this;
  out += other;
  return out;
}

Poly Poly::operator-(const Poly& other) const {
  Poly out = *this;
  out -= other;
  return out;
}

Poly Poly::operator*(const Rational& c) const {
  Poly out = *this;
  out *= c;
  return out;
}

Poly Poly::shifted(int offset) const {
  Poly out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m.shifted(offset), c);
  return out;
}

Poly Poly::permuted(std::span<const int> perm) const {
  Poly out;
  for (const auto& [m, c] : terms_) out.add(m.permuted(perm), c);
  return out;
}

Poly Poly::substitute_linear(int var, std::uint32_t mask, int sign) const {
  Poly lin = linear(mask);
  if (sign < 0) lin *= -1;
  std::vector<Poly> powers{Poly::constant(1)};
  Poly out;
  for (const auto& [m, c] : terms_) {
    const unsigned e = m.exp(var);
    while (powers.size() <= e) powers.push_back(powers.back() * lin);
    out += Poly::monomial(m.with_exp(var, 0), c) * powers[e];
  }
  return out;
}

Poly Poly::reduced_on_hyperplane(int d) const {
  if (d <= 0) return *this;
  const int last = d - 1;
  const std::uint32_t others = (1u << last) - 1u;
  return substitute_linear(last, others, -1);
}

int Poly::min_degree() const {
  int d = 1 << 20;
  for (const auto& [m, c] : terms_) d = std::min(d, static_cast<int>(m.degree()));
  return terms_.empty() ? 0 : d;
}

int Poly::max_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree()));
  return d;
}

unsigned Poly::max_exponent() const {
  unsigned e = 0;
  for (const auto& [m, c] : terms_) e = std::max(e, m.max_exp());
  return e;
}

std::string Poly::to_string(int d) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const Rational a = abs(c);
    bool unit = (m.degree() == 0);
    if (a != 1 || unit) os << a.get_str();
    for (int i = 0; i < d; ++i) {
      const unsigned e = m.exp(i);
      if (e == 0) continue;
      os << (a != 1 || !unit ? "" : "") << "n" << i;
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

Rational ratio(long n, long d) {
  if (d == 0) throw std::domain_error("ratio: zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

Rational binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

Rational factorial(long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(r);
}

}  // namespace ilw::sym
