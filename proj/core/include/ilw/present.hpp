#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilw/analysis.hpp"
#include "ilw/density.hpp"

namespace ilw::sym {

enum class Op { Dx, Hilbert, Q, GTilde, ProjHigh };

std::string to_string(Op op);

// Operator tree over the unknown: Leaf | Apply(op, child) | Product(children).
struct Expr {
  enum class Kind { Leaf, Apply, Product };
  Kind kind = Kind::Leaf;
  Op op = Op::Dx;
  std::vector<Expr> children;

  static Expr leaf() { return {}; }
  static Expr apply(Op op, Expr child);
  static Expr product(std::vector<Expr> factors);
  bool operator==(const Expr&) const = default;
};

// coeff · i^ipow · δ^dpow · ∫ body  (or the pointwise body for densities
// that are not integrated).
struct Monomial {
  Rational coeff;
  int ipow = 0;  // 0..3
  int dpow = 0;
  Expr body;
};

Counters count(const Monomial& m);

// Monomials of a density with physical operators.  Integrated densities use
// the per-shape minimal-derivative representative.
std::vector<Monomial> present(const Density& d);

std::string to_string(const Expr& e, bool shallow = false);
std::string to_string(const Monomial& m, bool integrated, bool shallow = false);
// One monomial per line, δ-power then shape order.
std::string to_string(const Density& d);

nlohmann::json to_json(const Rational& q);
nlohmann::json to_json(const Expr& e);
nlohmann::json to_json(const Monomial& m);
nlohmann::json to_json(const Density& d);

}  // namespace ilw::sym
