#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ilw/poly.hpp"

namespace ilw::sym {

enum class Regime { Deep, BO, Shallow, KdV };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);
bool is_shallow(Regime r);

// Scalar multiplier functions of the frequency carried by a sub-product.
//   Sign      sgn(m); Hilbert is −i·Sign, H∂ is Sign·m          (odd)
//   Q         Q̂_δ(m) = 𝔎_δ(m) − |m|                              (even)
//   GTilde    g(δm)/δ with g = coth − 1/x; G̃ = −i·GTilde         (odd)
//   HighPass  1_{|m|>N}                                           (even)
enum class BlockKind : std::uint8_t { Sign = 0, Q = 1, GTilde = 2, HighPass = 3 };

bool is_odd(BlockKind k);
std::string to_string(BlockKind k);

struct Block {
  BlockKind kind;
  std::uint16_t mask;  // leaves whose frequencies are summed
  auto operator<=>(const Block&) const = default;
};

// A monomial shape: i^ipow δ^dpow Π(blocks) over `degree` leaves; the rational
// polynomial in the leaf frequencies lives alongside in Density.
struct TermKey {
  int degree = 0;
  int ipow = 0;  // 0 or 1 (i² folded into the coefficient)
  int dpow = 0;
  std::vector<Block> blocks;  // sorted
  auto operator<=>(const TermKey&) const = default;
};

class Density {
 public:
  using Map = std::map<TermKey, Poly>;

  Density() = default;
  explicit Density(Regime r, bool integrated = false) : regime_(r), integrated_(integrated) {}

  static Density leaf(Regime r);
  static Density constant(Regime r, const Rational& c);

  Regime regime() const { return regime_; }
  bool integrated() const { return integrated_; }
  std::optional<Rational> declared_rank() const { return rank_; }
  void set_declared_rank(Rational r) { rank_ = std::move(r); }
  void set_regime(Regime r) { regime_ = r; }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::size_t monomial_count() const;

  // Adds i^ipow·(key, poly); canonicalizes.
  void add(TermKey key, Poly poly);

  Density& operator+=(const Density& other);
  Density& operator-=(const Density& other);
  Density operator+(const Density& other) const;
  Density operator-(const Density& other) const;
  Density operator*(const Rational& c) const;
  Density times_i(int power = 1) const;
  Density times_delta(int power) const;
  bool operator==(const Density& other) const;

  // Pointwise product; terms above max_degree are discarded.
  Density multiply(const Density& other, int max_degree = 1 << 20) const;

  // Operators applied to the whole (unintegrated) density.
  Density dx() const;           // ∂ₓ
  Density hilbert_dx() const;   // H∂ₓ
  Density q_op() const;         // Q_δ
  Density gtilde_dx() const;    // G̃_δ∂ₓ
  Density hilbert() const;      // H = −i·Sign
  Density gtilde() const;       // G̃_δ = −i·GTilde
  Density block_op(BlockKind k) const;

  Density degree_part(int d) const;
  Density max_degree_part(int d) const;

  Density integrate() const;  // ∫ dx, canonical integrated form
  Density real_part() const;  // integrated only

  // Keep only terms for which pred(key) holds.
  template <class Pred>
  Density filtered(Pred pred) const {
    Density out(regime_, integrated_);
    out.rank_ = rank_;
    for (const auto& [k, p] : terms_)
      if (pred(k)) out.terms_.emplace(k, p);
    return out;
  }

 private:
  friend class DensityBuilder;
  void add_raw(const TermKey& key, const Poly& poly);

  Regime regime_ = Regime::Deep;
  bool integrated_ = false;
  std::optional<Rational> rank_;
  Map terms_;
};

// Canonical form of a single term.  Returns (key, poly) pieces whose sum is
// equivalent; empty when the term vanishes.
std::vector<std::pair<TermKey, Poly>> canonical_terms(TermKey key, Poly poly, bool integrated);

// Sign-carrying symmetry group of a canonical key: permutations σ (as
// new-index arrays) with sign ε such that the term is invariant under
// P ↦ ε·σ(P).  Identity is always first.
struct Symmetry {
  std::vector<int> perm;
  int sign;
};
std::vector<Symmetry> key_symmetries(const TermKey& key, bool integrated);

// Symmetrize a polynomial over a key's symmetry group (integrated semantics).
Poly symmetrize(const TermKey& key, const Poly& poly);

}  // namespace ilw::sym
