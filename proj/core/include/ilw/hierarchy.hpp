#pragma once

#include "ilw/density.hpp"

namespace ilw::sym {

inline constexpr int kAllDegrees = 1 << 20;

// Microscopic conservation laws.  `max_degree` truncates every intermediate
// product, which is exact for the retained low-degree part.
Density chi_deep(int n, int max_degree = kAllDegrees);
Density chi_bo(int n, int max_degree = kAllDegrees);
Density h_shallow(int n, int max_degree = kAllDegrees);
Density h_kdv(int n, int max_degree = kAllDegrees);
Density h_tilde(int n, int max_degree = kAllDegrees);

// Deep recursion operator L₀ = (G_δ − i)∂ₓ + δ⁻¹ and its δ-free analogue.
Density apply_l0_deep(const Density& f);
Density apply_l0_bo(const Density& f);
// L̃₀ = (1 + iδG̃_δ)∂ₓ
Density apply_l0_shallow(const Density& f);

// Macroscopic conservation laws (integrated densities).
Density energy_deep(int k, int max_degree = kAllDegrees);
Density energy_bo(int k, int max_degree = kAllDegrees);
Density energy_shallow(int k, int max_degree = kAllDegrees);
Density energy_kdv(int kappa, int max_degree = kAllDegrees);

Rational b_coeff(int k);
Rational a_coeff(int k, int l);        // deep weights, l even
Rational a_tilde_coeff(int k, int l);  // shallow weights

// δ-free part: deep drops δ-carrying and Q-carrying monomials (result in BO);
// shallow drops δ-carrying monomials and sends G̃ → −⅓∂ₓ (result in KdV).
Density delta_free_part(const Density& d);

// Interaction part: monomials of degree ≥ 3.
Density interaction_part(const Density& d);

}  // namespace ilw::sym
