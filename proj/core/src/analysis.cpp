#include "ilw/analysis.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace ilw::sym {

namespace {

int parity(int n) { return ((n % 2) + 2) % 2; }


std::string rational_text(const Rational& q) { return q.get_str(); }

std::string key_text(const TermKey& k) {
  std::ostringstream os;
  os << "d=" << k.degree << " i^" << k.ipow << " δ^" << k.dpow;
  for (const Block& b : k.blocks) os << ' ' << to_string(b.kind) << ':' << b.mask;
  return os.str();
}

// All exponent vectors of length d with total `degree` and entries ≤ cap,
// ordered by (max exponent, lexicographic vector).
std::vector<Mono> monomials_up_to(int d, unsigned degree, unsigned cap) {
  std::vector<Mono> out;
  std::vector<unsigned> e(static_cast<std::size_t>(d), 0);
  auto rec = [&](auto&& self, int i, unsigned left) -> void {
    if (i == d - 1) {
      if (left > cap) return;
      e[static_cast<std::size_t>(i)] = left;
      Mono m;
      for (int j = 0; j < d; ++j) m = m.with_exp(j, e[static_cast<std::size_t>(j)]);
      out.push_back(m);
      return;
    }
    for (unsigned x = 0; x <= std::min(cap, left); ++x) {
      e[static_cast<std::size_t>(i)] = x;
      self(self, i + 1, left - x);
    }
  };
  if (d == 0) {
    if (degree == 0) out.push_back(Mono{});
    return out;
  }
  rec(rec, 0, degree);
  std::stable_sort(out.begin(), out.end(), [](Mono a, Mono b) { return a.max_exp() < b.max_exp(); });
  return out;
}

using Entry = std::pair<TermKey, Mono>;
using SparseVec = std::map<Entry, Rational>;

SparseVec flatten(const Density& d) {
  SparseVec v;
  for (const auto& [k, p] : d.terms())
    for (const auto& [m, c] : p.terms()) v.emplace(Entry{k, m}, c);
  return v;
}

SparseVec canonical_vector(const TermKey& key, const Poly& p) {
  SparseVec v;
  for (auto& [k, q] : canonical_terms(key, p, true))
    for (const auto& [m, c] : q.terms()) {
      auto [it, ins] = v.try_emplace(Entry{k, m}, c);
      if (!ins) {
        it->second += c;
        if (it->second == 0) v.erase(it);
      }
    }
  return v;
}

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  for (const auto& [e, c] : x) {
    auto [it, ins] = y.try_emplace(e, a * c);
    if (!ins) {
      it->second += a * c;
      if (it->second == 0) y.erase(it);
    }
  }
}

// Incremental exact elimination.  Columns are reduced in insertion order, so
// the solution uses the earliest independent columns.
class Eliminator {
 public:
  explicit Eliminator(std::size_t tracked) : tracked_(tracked) {}

  void add(SparseVec v) {
    std::map<std::size_t, Rational> combo;
    combo[columns_] = 1;
    ++columns_;
    reduce(v, combo);
    if (v.empty()) return;
    Row r;
    r.pivot = v.begin()->first;
    r.vec = std::move(v);
    r.combo = std::move(combo);
    rows_.push_back(std::move(r));
  }

  // Coefficients of the first `tracked` columns, or nullopt if target ∉ span.
  std::optional<std::vector<Rational>> solve(SparseVec target) const {
    std::map<std::size_t, Rational> combo;
    reduce(target, combo);
    if (!target.empty()) return std::nullopt;
    std::vector<Rational> out(tracked_, Rational(0));
    for (const auto& [j, c] : combo)
      if (j < tracked_) out[j] = -c;
    return out;
  }

 private:
  struct Row {
    Entry pivot;
    SparseVec vec;
    std::map<std::size_t, Rational> combo;
  };

  void reduce(SparseVec& v, std::map<std::size_t, Rational>& combo) const {
    for (const Row& r : rows_) {
      auto it = v.find(r.pivot);
      if (it == v.end()) continue;
      const Rational f = -it->second / r.vec.at(r.pivot);
      axpy(v, f, r.vec);
      for (const auto& [j, c] : r.combo) {
        auto [ci, ins] = combo.try_emplace(j, f * c);
        if (!ins) ci->second += f * c;
      }
    }
  }

  std::size_t tracked_;
  std::size_t columns_ = 0;
  std::vector<Row> rows_;
};

// Three nonzero integers summing to zero have sign products
// s₀s₁ + s₁s₂ + s₀s₂ = −1 and s₀s₁s₂ = −(s₀ + s₁ + s₂).
std::vector<SparseVec> cubic_sign_relations(const TermKey& key, unsigned degree) {
  std::vector<SparseVec> out;
  if (key.degree != 3) return out;
  TermKey base = key;
  base.blocks.clear();
  for (const Block& b : key.blocks)
    if (b.kind != BlockKind::Sign) base.blocks.push_back(b);
  auto with_signs = [&](std::initializer_list<int> leaves) {
    TermKey k = base;
    for (int l : leaves) k.blocks.push_back({BlockKind::Sign, static_cast<std::uint16_t>(1u << l)});
    std::sort(k.blocks.begin(), k.blocks.end());
    return k;
  };
  for (Mono m : monomials_up_to(3, degree, degree)) {
    const Poly p = Poly::monomial(m);
    SparseVec r1 = canonical_vector(with_signs({0, 1}), p);
    axpy(r1, 1, canonical_vector(with_signs({1, 2}), p));
    axpy(r1, 1, canonical_vector(with_signs({0, 2}), p));
    axpy(r1, 1, canonical_vector(base, p));
    if (!r1.empty()) out.push_back(std::move(r1));
    SparseVec r2 = canonical_vector(with_signs({0, 1, 2}), p);
    for (int l = 0; l < 3; ++l) axpy(r2, 1, canonical_vector(with_signs({l}), p));
    if (!r2.empty()) out.push_back(std::move(r2));
  }
  return out;
}

// Frequency degree of a key's polynomial (canonical polys are homogeneous).
unsigned poly_degree(const Poly& p) { return p.is_zero() ? 0u : static_cast<unsigned>(p.max_degree()); }

}  // namespace

// ---------------------------------------------------------------------------
// quadratic parts

QuadraticForm normalized(QuadraticForm q) {
  std::map<std::tuple<Rational, int, int>, Rational> acc;
  for (auto& t : q) acc[{t.level, t.g_power, t.delta_power}] += t.coeff;
  QuadraticForm out;
  for (auto& [k, c] : acc) {
    if (c == 0) continue;
    out.push_back({c, std::get<2>(k), std::get<1>(k), std::get<0>(k)});
  }
  return out;
}

QuadraticForm quadratic_part(const Density& d) {
  if (!d.integrated()) throw std::invalid_argument("quadratic_part: integrated density required");
  const bool shallow = is_shallow(d.regime());
  QuadraticForm out;
  for (const auto& [key, poly] : d.terms()) {
    if (key.degree != 2) continue;
    int signs = 0, qs = 0, gts = 0;
    for (const Block& b : key.blocks) {
      if (b.mask != 1u) throw std::logic_error("quadratic_part: unexpected block mask");
      switch (b.kind) {
        case BlockKind::Sign: ++signs; break;
        case BlockKind::Q: ++qs; break;
        case BlockKind::GTilde: ++gts; break;
        case BlockKind::HighPass: throw std::invalid_argument("quadratic_part: high-pass blocks are not quadratic forms");
      }
    }
    for (const auto& [m, c] : poly.terms()) {
      const int e = static_cast<int>(m.exp(0));
      // the n ↦ −n symmetry kills odd total parity
      if (parity(e + signs + gts) != 0) continue;
      if (key.ipow != 0) throw std::logic_error("quadratic_part: imaginary quadratic term " + key_text(key));
      // s^a n^e = |n|^e when a+e is even (a ≤ 1 after s² removal)
      if (!shallow) {
        // |n|^e·(𝔎 − |n|)^j = Σ_i C(j,i) 𝔎^i (−1)^{j−i} |n|^{e+j−i}
        for (int i = 0; i <= qs; ++i) {
          Rational coeff = c * binomial(qs, i);
          if ((qs - i) % 2 != 0) coeff = -coeff;
          const int abs_power = e + qs - i;
          out.push_back({coeff, key.dpow, i, ratio(abs_power + i, 2)});
        }
      } else {
        // g̃^j n^e = 𝔏^j n^{e−j}
        if (e < gts) throw std::logic_error("quadratic_part: negative frequency power");
        const int abs_power = e - gts;
        out.push_back({c, key.dpow, gts, ratio(abs_power + gts, 2)});
      }
    }
  }
  return normalized(std::move(out));
}

QuadraticForm quadratic_chi_closed_form(int n) {
  QuadraticForm out;
  const int sign = parity(n + 1) == 0 ? 1 : -1;
  for (int m = 0; m <= n - 2; ++m) {
    for (int l = 0; l <= m; l += 2) {
      Rational c = Rational(2 * sign) * binomial(n, m + 2) * binomial(m + 1, l + 1);
      out.push_back({c, -(n - 2 - m), m - l, ratio(m, 2)});
    }
  }
  return normalized(std::move(out));
}

QuadraticForm quadratic_h_tilde_closed_form(int n) {
  QuadraticForm out;
  const int p = parity(n);
  const int sign = parity((n - 2 - p) / 2) == 0 ? 1 : -1;
  for (int l = parity(n - 1); l <= n - 1; l += 2) {
    out.push_back({Rational(sign) * binomial(n, l), l - 1 + p, l, ratio(n - 1, 2)});
  }
  return normalized(std::move(out));
}

QuadraticForm quadratic_h_kdv_even_closed_form(int n) {
  return {{Rational(parity(n - 1) == 0 ? 1 : -1), 0, 0, Rational(n - 1)}};
}

QuadraticForm quadratic_energy_deep_closed_form(int k) {
  QuadraticForm out;
  for (int l = 0; l <= k; l += 2) {
    out.push_back({ratio(1, 2) * binomial(k + 1, l + 1), 0, k - l, ratio(k, 2)});
  }
  // weights a_{k,ℓ} = C(k+1, ℓ+1)/b_k
  Rational b = 0;
  for (int l = 0; l <= k; l += 2) b += binomial(k + 1, l + 1);
  for (auto& t : out) t.coeff /= b;
  return normalized(std::move(out));
}

QuadraticForm quadratic_energy_shallow_closed_form(int k) {
  QuadraticForm out;
  if (k % 2 == 1) {
    const int kappa = (k + 1) / 2;
    for (int l = 1; l <= 2 * kappa - 1; l += 2)
      out.push_back({ratio(3, 4 * kappa) * binomial(2 * kappa, l), l - 1, l, ratio(2 * kappa - 1, 2)});
  } else {
    const int kappa = k / 2;
    for (int l = 0; l <= 2 * kappa; l += 2)
      out.push_back({ratio(1, 2) * binomial(2 * kappa + 1, l), l, l, Rational(kappa)});
  }
  return normalized(std::move(out));
}

std::string to_string(const QuadraticForm& q) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : q) {
    if (!first) os << " + ";
    first = false;
    os << rational_text(t.coeff);
    if (t.delta_power != 0) os << "·δ^" << t.delta_power;
    os << "·‖G^(" << t.g_power << "/2)u‖²_{H^" << rational_text(t.level) << "}";
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------------------
// p*

Density p_star(const Density& d) {
  Density out(d.regime(), d.integrated());
  for (const auto& [key, poly] : d.terms()) {
    for (const Block& b : key.blocks)
      if (b.kind == BlockKind::HighPass) throw std::invalid_argument("p_star: density already carries a high-pass projection");
    const int dd = key.degree;
    if (dd + 1 > Mono::kMaxVars) throw std::overflow_error("p_star: too many factors");
    for (int i = 0; i < dd; ++i) {
      TermKey k{dd + 1, key.ipow + 1, key.dpow, {}};
      for (Block b : key.blocks) {
        if (b.mask & (1u << i)) b.mask = static_cast<std::uint16_t>(b.mask | (1u << dd));
        k.blocks.push_back(b);
      }
      k.blocks.push_back({BlockKind::HighPass, static_cast<std::uint16_t>((1u << i) | (1u << dd))});
      Poly p = poly.substitute_linear(i, (1u << i) | (1u << dd));
      p = p * Poly::monomial(Mono::var(dd), Rational(-2));
      out.add(std::move(k), std::move(p));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// counters and ranks

Counters counters(const TermKey& key, Mono m) {
  Counters c;
  c.leaves = key.degree;
  c.derivatives = static_cast<int>(m.degree());
  c.delta = key.dpow;
  for (const Block& b : key.blocks) {
    switch (b.kind) {
      case BlockKind::Sign: ++c.sign_blocks; break;
      case BlockKind::Q: ++c.q_blocks; break;
      case BlockKind::GTilde: ++c.gtilde_blocks; break;
      case BlockKind::HighPass: ++c.high_pass; break;
    }
  }
  return c;
}

Rational deep_rank(const Counters& c) { return Rational(c.leaves + c.derivatives - c.delta + c.q_blocks); }

Rational shallow_rank(const Counters& c) {
  return Rational(c.leaves) + ratio(c.derivatives + c.gtilde_blocks - c.delta, 2);
}

Rational rank(Regime r, const Counters& c) { return is_shallow(r) ? shallow_rank(c) : deep_rank(c); }

std::vector<std::string> rank_violations(const Density& d) {
  std::vector<std::string> out;
  if (!d.declared_rank()) {
    out.emplace_back("density has no declared rank");
    return out;
  }
  const Rational want = *d.declared_rank();
  for (const auto& [k, p] : d.terms()) {
    for (const auto& [m, c] : p.terms()) {
      const Rational got = rank(d.regime(), counters(k, m));
      if (got != want) out.push_back(key_text(k) + " " + Poly::monomial(m, c).to_string(k.degree) + ": rank " + got.get_str() + " ≠ " + want.get_str());
    }
  }
  return out;
}

std::vector<std::string> h_shallow_bound_violations(const Density& h, int n) {
  std::vector<std::string> out;
  for (const auto& [k, p] : h.terms()) {
    for (const auto& [m, c] : p.terms()) {
      const Counters ct = counters(k, m);
      std::string why;
      if (ct.gtilde_blocks > std::min(ct.derivatives, ct.delta)) why = "#G̃ > min(#∂, #δ)";
      else if (ct.leaves + ct.derivatives > n + 1) why = "#v + #∂ > n + 1";
      else if (ct.delta < 0 || ct.delta > n) why = "#δ outside [0, n]";
      if (!why.empty()) out.push_back(key_text(k) + ": " + why);
    }
  }
  return out;
}

std::vector<std::string> h_tilde_bound_violations(const Density& ih, int n) {
  std::vector<std::string> out;
  const int p = parity(n);
  for (const auto& [k, poly] : ih.terms()) {
    for (const auto& [m, c] : poly.terms()) {
      const Counters ct = counters(k, m);
      std::string why;
      if (ct.gtilde_blocks > std::min(ct.derivatives, ct.delta + 1 - p)) why = "#G̃ > min(#∂, #δ + 1 − p)";
      else if (ct.leaves + ct.derivatives > n + 1) why = "#v + #∂ > n + 1";
      else if (ct.delta < 0 || ct.delta > n + p - 2) why = "#δ outside [0, n + p − 2]";
      if (!why.empty()) out.push_back(key_text(k) + ": " + why);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// presentation and span tests

Representative minimal_representative(const TermKey& key, const Poly& poly) {
  if (poly.is_zero()) return {};
  const unsigned deg = poly_degree(poly);
  const int d = key.degree;
  SparseVec target;
  for (const auto& [m, c] : poly.terms()) target.emplace(Entry{key, m}, c);
  for (unsigned cap = (deg + static_cast<unsigned>(d) - 1) / static_cast<unsigned>(std::max(d, 1)); cap <= deg; ++cap) {
    const auto cands = monomials_up_to(d, deg, cap);
    Eliminator el(cands.size());
    for (Mono m : cands) el.add(canonical_vector(key, Poly::monomial(m)));
    if (auto sol = el.solve(target)) {
      Representative r;
      for (std::size_t j = 0; j < cands.size(); ++j)
        if ((*sol)[j] != 0) r.poly.add(cands[j], (*sol)[j]);
      r.max_exponent = r.poly.max_exponent();
      return r;
    }
  }
  throw std::logic_error("minimal_representative: polynomial not in the span of its own key");
}

std::optional<std::vector<Rational>> solve_in_span(const Density& target, const std::vector<Density>& basis,
                                                   int remainder_max_exponent) {
  Eliminator el(basis.size());
  std::map<TermKey, unsigned> keys;
  for (const auto& [k, p] : target.terms()) keys.emplace(k, poly_degree(p));
  for (const Density& b : basis) {
    el.add(flatten(b));
    for (const auto& [k, p] : b.terms()) keys.emplace(k, poly_degree(p));
  }
  std::set<std::pair<TermKey, unsigned>> related;
  for (const auto& [k, deg] : keys) {
    TermKey base = k;
    std::erase_if(base.blocks, [](const Block& b) { return b.kind == BlockKind::Sign; });
    if (!related.insert({base, deg}).second) continue;
    for (auto& r : cubic_sign_relations(base, deg)) el.add(std::move(r));
  }
  if (remainder_max_exponent >= 0) {
    for (const auto& [k, deg] : keys)
      for (Mono m : monomials_up_to(k.degree, deg, static_cast<unsigned>(remainder_max_exponent)))
        el.add(canonical_vector(k, Poly::monomial(m)));
  }
  return el.solve(flatten(target));
}

Density cubic_shape(Regime r, std::array<int, 3> derivs, std::array<int, 3> hilberts) {
  Density prod = Density::constant(r, 1);
  for (int j = 0; j < 3; ++j) {
    Density f = Density::leaf(r);
    for (int a = 0; a < derivs[static_cast<std::size_t>(j)]; ++a) f = f.dx();
    for (int a = 0; a < hilberts[static_cast<std::size_t>(j)]; ++a) f = f.hilbert();
    prod = prod.multiply(f);
  }
  return prod.integrate();
}

Density cubic_leading_part(const Density& energy) {
  return energy.filtered([](const TermKey& k) {
    if (k.degree != 3 || k.dpow != 0) return false;
    for (const Block& b : k.blocks)
      if (b.kind == BlockKind::Q) return false;
    return true;
  });
}

std::optional<std::vector<Rational>> cubic_shape_coefficients(const Density& energy, int k) {
  const Density lead = cubic_leading_part(energy);
  const Regime r = energy.regime();
  if (k % 2 == 0) {
    const int m = k / 2;
    if (m == 0) return lead.is_zero() ? std::optional<std::vector<Rational>>(std::vector<Rational>{}) : std::nullopt;
    return solve_in_span(lead, {cubic_shape(r, {0, m - 1, m}, {0, 1, 0})}, m - 1);
  }
  const int m = (k - 1) / 2;
  std::vector<Density> basis{cubic_shape(r, {0, m, m}, {0, 0, 0}), cubic_shape(r, {0, m, m}, {0, 0, 1}),
                             cubic_shape(r, {0, m, m}, {0, 1, 1})};
  // Other derivative patterns with at most m derivatives per factor, any
  // Hilbert decoration.  They lie outside the (0, m, m) fundamental form.
  for (int a = 0; a <= m; ++a) {
    for (int b = a; b <= m; ++b) {
      const int c = 2 * m - a - b;
      if (c < b || c > m || (a == 0 && b == m)) continue;
      for (int h = 0; h < 8; ++h)
        basis.push_back(cubic_shape(r, {a, b, c}, {h & 1, (h >> 1) & 1, (h >> 2) & 1}).real_part());
    }
  }
  auto sol = solve_in_span(lead, basis);
  if (sol) sol->resize(3);
  return sol;
}

std::vector<std::string> deep_structure_violations(const Density& energy, int k) {
  std::vector<std::string> out;
  const int per_factor = k <= 1 ? 0 : k / 2;  // ⌈(k−1)/2⌉
  for (const auto& [key, poly] : energy.terms()) {
    if (key.degree < 3) continue;
    for (const auto& [m, c] : poly.terms()) {
      const Counters ct = counters(key, m);
      if (deep_rank(ct) != k + 2) out.push_back(key_text(key) + ": rank ≠ k + 2");
      if (ct.derivatives > std::max(k - 1, 0)) out.push_back(key_text(key) + ": #∂ > k − 1");
    }
    const Representative rep = minimal_representative(key, poly);
    if (static_cast<int>(rep.max_exponent) > per_factor)
      out.push_back(key_text(key) + ": " + std::to_string(rep.max_exponent) + " derivatives on one factor");
  }
  return out;
}

}  // namespace ilw::sym
