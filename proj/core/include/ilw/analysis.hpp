#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ilw/density.hpp"

namespace ilw::sym {

// One term coeff·δ^p·‖𝒢^{g/2}u‖²_{Ḣ^level}, read bilinearly as
// Σ_n coeff·δ^p·|n|^{2·level−g}·M(n)^g·|û(n)|², where M is 𝔎_δ (deep),
// 𝔏_δ (shallow) and the exponent g is 0 in the limits.
struct QuadraticTerm {
  Rational coeff;
  int delta_power = 0;
  int g_power = 0;
  Rational level;
  bool operator==(const QuadraticTerm&) const = default;
};

using QuadraticForm = std::vector<QuadraticTerm>;

// Merges like terms, drops zeros and sorts by (level, g, δ-power).
QuadraticForm normalized(QuadraticForm q);

// Quadratic part of an integrated density in the basis above.  Throws if a
// purely imaginary quadratic piece survives canonicalization.
QuadraticForm quadratic_part(const Density& d);

// Closed-form quadratic parts.
QuadraticForm quadratic_chi_closed_form(int n);        // ∫ of the quadratic part of χₙ
QuadraticForm quadratic_h_tilde_closed_form(int n);    // ∫ of the quadratic part of h̃ₙ
QuadraticForm quadratic_h_kdv_even_closed_form(int n); // ∫ of the quadratic part of h^KdV_{2n}
QuadraticForm quadratic_energy_deep_closed_form(int k);
QuadraticForm quadratic_energy_shallow_closed_form(int k);

std::string to_string(const QuadraticForm& q);

// p ↦ p*_N: each fundamental factor ∂^α u replaced by −2∂^α P_{>N}(u∂u).
// Works on pointwise and integrated densities; the input must be free of
// high-pass blocks.
Density p_star(const Density& d);

// Operator counts of one canonical monomial.  `derivatives` counts explicit
// ∂ₓ only (the derivative hidden in Q_δ is not counted).
struct Counters {
  int leaves = 0;
  int derivatives = 0;
  int delta = 0;  // exponent of δ
  int q_blocks = 0;
  int gtilde_blocks = 0;
  int sign_blocks = 0;
  int high_pass = 0;
};

Counters counters(const TermKey& key, Mono m);
Rational deep_rank(const Counters& c);     // #u + #∂ + #δ⁻¹ + #Q
Rational shallow_rank(const Counters& c);  // #v + ½(#∂ + #G̃ − #δ)
Rational rank(Regime r, const Counters& c);

// Human-readable descriptions of monomials breaking rank homogeneity.
std::vector<std::string> rank_violations(const Density& d);

// Counter bounds for the shallow tables.  Empty means all bounds hold.
std::vector<std::string> h_shallow_bound_violations(const Density& h, int n);
std::vector<std::string> h_tilde_bound_violations(const Density& integrated_h_tilde, int n);

// A polynomial in all leaf frequencies of a canonical key whose canonical
// form equals `poly`, with the smallest possible per-leaf exponent.  Ties go
// to the earliest candidate monomials in (max exponent, exponent vector)
// order, so the result is deterministic.
struct Representative {
  unsigned max_exponent = 0;
  Poly poly;
};
Representative minimal_representative(const TermKey& key, const Poly& poly);

// Structural bounds for deep energies: interaction monomials have #u ≥ 3,
// rank k+2, #∂ ≤ k−1 and, in the minimal presentation, at most
// ⌈(k−1)/2⌉ derivatives on any factor.
std::vector<std::string> deep_structure_violations(const Density& energy, int k);

// Exact span membership: coefficients c with target = Σ c_j basis_j, modulo
// the three-wave sign relations valid on Σn = 0 for cubic sign shapes.
std::optional<std::vector<Rational>> solve_in_span(const Density& target, const std::vector<Density>& basis,
                                                   int remainder_max_exponent = -1);

// Cubic δ-free part of a deep energy: dpow 0, no Q blocks, degree 3.
Density cubic_leading_part(const Density& energy);

// Even k = 2m: coefficient c with B − c·∫u(H∂^{m−1}u)(∂^m u) expressible with
// at most m−1 derivatives per factor.  Odd k = 2m+1: coefficients over the
// shapes ∫(H^{a}u)(H^{b}∂^m u)(H^{c}∂^m u), (a,b,c) ∈ {(0,0,0),(0,0,1),(0,1,1)},
// modulo cubic terms whose derivative pattern differs from (0, m, m) with at
// most m derivatives per factor.
std::optional<std::vector<Rational>> cubic_shape_coefficients(const Density& energy, int k);

// Canonical integrated form of ∫(H^{h0}∂^{e0}u)(H^{h1}∂^{e1}u)(H^{h2}∂^{e2}u).
Density cubic_shape(Regime r, std::array<int, 3> derivs, std::array<int, 3> hilberts);

}  // namespace ilw::sym
