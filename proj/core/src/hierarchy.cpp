#include "ilw/hierarchy.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace ilw::sym {

namespace {

enum class Table { ChiDeep, ChiBO, HShallow, HKdV };

// Memo of recursion tables keyed by (table, degree truncation).
class Memo {
 public:
  struct Tab {
    std::vector<Density> main;
    std::vector<Density> aux;  // exponential-series coefficients for the χ tables
  };
  Tab& table(Table t, int max_degree) { return tables_[{t, max_degree}]; }
  std::mutex& mutex() { return mutex_; }

 private:
  std::mutex mutex_;
  std::map<std::pair<Table, int>, Tab> tables_;
};

Memo& memo() {
  static Memo m;
  return m;
}

// Σ_{m=1}^{n-1} m·X_m·E_{n-m} / n  (the j ≥ 2 part of exp(ΣX_m ε^m) at order n)
Density exp_tail(const std::vector<Density>& x, const std::vector<Density>& e, int n, Regime r, int max_degree) {
  Density acc(r);
  for (int m = 1; m <= n - 1; ++m) {
    acc += x[static_cast<std::size_t>(m)].multiply(e[static_cast<std::size_t>(n - m)], max_degree) * Rational(m);
  }
  return acc * ratio(1, n);
}

void extend_chi(std::vector<Density>& chi, std::vector<Density>& ex, int n, Regime r, int max_degree) {
  // chi[0] unused; ex[k] are the exponential-series coefficients.
  if (chi.empty()) {
    chi.emplace_back(r);
    ex.emplace_back(r);
    Density first = Density::leaf(r) * Rational(2);
    first.set_declared_rank(1);
    chi.push_back(first);
    ex.push_back(first);
  }
  while (static_cast<int>(chi.size()) <= n) {
    const int k = static_cast<int>(chi.size());
    Density tail = exp_tail(chi, ex, k, r, max_degree);
    const Density& prev = chi.back();
    Density lin = (r == Regime::BO) ? apply_l0_bo(prev) : apply_l0_deep(prev);
    Density next = (tail + lin) * Rational(-1);
    next = next.max_degree_part(max_degree);
    next.set_declared_rank(k);
    chi.push_back(next);
    ex.push_back(next + tail);
  }
}

void extend_h(std::vector<Density>& h, int n, int max_degree) {
  const Regime r = Regime::Shallow;
  if (h.empty()) {
    Density h0 = Density::leaf(r) * Rational(-1);
    h0.set_declared_rank(1);
    h.push_back(h0);
  }
  while (static_cast<int>(h.size()) <= n) {
    const int k = static_cast<int>(h.size());
    // Z_m = 2iδ h_{m-1}, W = exp(Z); R_j = W_j − Z_j.
    std::vector<Density> z(static_cast<std::size_t>(k + 2), Density(r));
    std::vector<Density> w(static_cast<std::size_t>(k + 2), Density(r));
    for (int m = 1; m <= k; ++m) z[static_cast<std::size_t>(m)] = (h[static_cast<std::size_t>(m - 1)] * Rational(2)).times_i(1).times_delta(1);
    std::vector<Density> rest(static_cast<std::size_t>(k + 2), Density(r));
    for (int j = 1; j <= k + 1; ++j) {
      rest[static_cast<std::size_t>(j)] = exp_tail(z, w, j, r, max_degree);
      w[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)] + rest[static_cast<std::size_t>(j)];
    }
    Density next = rest[static_cast<std::size_t>(k)].times_delta(-2) * ratio(-1, 2);
    next += rest[static_cast<std::size_t>(k + 1)].times_i(1).times_delta(-1) * ratio(1, 2);
    next += apply_l0_shallow(h.back());
    next = next.max_degree_part(max_degree);
    next.set_declared_rank(Rational(1) + ratio(k, 2));
    h.push_back(next);
  }
}

void extend_h_kdv(std::vector<Density>& h, int n, int max_degree) {
  const Regime r = Regime::KdV;
  if (h.empty()) {
    Density h0 = Density::leaf(r) * Rational(-1);
    h0.set_declared_rank(1);
    h.push_back(h0);
  }
  if (h.size() == 1) {
    Density h1 = Density::leaf(r).dx() * Rational(-1);
    h1.set_declared_rank(ratio(3, 2));
    h.push_back(h1);
  }
  while (static_cast<int>(h.size()) <= n) {
    const int k = static_cast<int>(h.size());
    Density next = h.back().dx();
    for (int a = 0; a <= k - 2; ++a) {
      next += h[static_cast<std::size_t>(a)].multiply(h[static_cast<std::size_t>(k - 2 - a)], max_degree);
    }
    next.set_declared_rank(Rational(1) + ratio(k, 2));
    h.push_back(next);
  }
}

Density cached(Table t, int n, int max_degree) {
  if (n < 0) throw std::invalid_argument("hierarchy index must be nonnegative");
  auto& m = memo();
  std::lock_guard lock(m.mutex());
  auto& tab = m.table(t, max_degree);
  switch (t) {
    case Table::ChiDeep: extend_chi(tab.main, tab.aux, n, Regime::Deep, max_degree); break;
    case Table::ChiBO: extend_chi(tab.main, tab.aux, n, Regime::BO, max_degree); break;
    case Table::HShallow: extend_h(tab.main, n, max_degree); break;
    case Table::HKdV: extend_h_kdv(tab.main, n, max_degree); break;
  }
  return tab.main[static_cast<std::size_t>(n)];
}

int parity(int n) { return n % 2 == 0 ? 0 : 1; }

}  // namespace

Density apply_l0_deep(const Density& f) {
  // (G − i)∂ + δ⁻¹ with G∂ = H∂ + Q
  Density out = f.hilbert_dx() + f.q_op();
  out -= f.dx().times_i(1);
  out += f.times_delta(-1);
  return out;
}

Density apply_l0_bo(const Density& f) {
  Density out = f.hilbert_dx();
  out -= f.dx().times_i(1);
  return out;
}

Density apply_l0_shallow(const Density& f) { return f.dx() + f.gtilde_dx().times_i(1).times_delta(1); }

Density chi_deep(int n, int max_degree) {
  if (n < 1) throw std::invalid_argument("chi_deep: n >= 1 required");
  return cached(Table::ChiDeep, n, max_degree);
}

Density chi_bo(int n, int max_degree) {
  if (n < 1) throw std::invalid_argument("chi_bo: n >= 1 required");
  return cached(Table::ChiBO, n, max_degree);
}

Density h_shallow(int n, int max_degree) { return cached(Table::HShallow, n, max_degree); }

Density h_kdv(int n, int max_degree) { return cached(Table::HKdV, n, max_degree); }

Density h_tilde(int n, int max_degree) {
  if (n < 1) throw std::invalid_argument("h_tilde: n >= 1 required");
  Density acc(Regime::Shallow);
  for (int j = 1; j <= n; ++j) acc += h_shallow(j, max_degree).times_i(-(n - j)).times_delta(-(n - j));
  const int p = parity(n);
  Density out = acc.times_i(-p).times_delta(p - 2);
  out.set_declared_rank(Rational(2) + ratio(n, 2) - ratio(p, 2));
  return out;
}

Rational b_coeff(int k) {
  Rational b = 0;
  for (int l = 0; l <= k; l += 2) b += binomial(k + 1, l + 1);
  return b;
}

Rational a_coeff(int k, int l) {
  if (l % 2 != 0 || l < 0 || l > k) return 0;
  return binomial(k + 1, l + 1) / b_coeff(k);
}

Rational a_tilde_coeff(int k, int l) {
  if (k <= 0) return l == 0 ? Rational(1) : Rational(0);
  if (k % 2 == 1) {
    const int kappa = (k + 1) / 2;
    return ratio(3, 2 * kappa) * binomial(2 * kappa, l);
  }
  return binomial(k + 1, l);
}

Density energy_deep(int k, int max_degree) {
  if (k < 0) throw std::invalid_argument("energy_deep: k >= 0 required");
  const int sgn = (k % 2 == 0) ? -1 : 1;  // (−1)^{k+1}
  Density bracket = chi_deep(k + 2, max_degree).integrate().real_part();
  for (int j = 0; j <= k - 1; ++j) {
    const Rational c = Rational(-4 * sgn) * binomial(k + 2, j + 2) * b_coeff(j);
    bracket += energy_deep(j, max_degree).times_delta(-(k - j)) * c;
  }
  Density out = bracket * (Rational(sgn) / (Rational(4) * b_coeff(k)));
  out.set_declared_rank(k + 2);
  return out;
}

Density energy_bo(int k, int max_degree) {
  if (k < 0) throw std::invalid_argument("energy_bo: k >= 0 required");
  const int sgn = (k % 2 == 0) ? -1 : 1;
  Density out = chi_bo(k + 2, max_degree).integrate().real_part() * (Rational(sgn) / (Rational(4) * b_coeff(k)));
  out.set_declared_rank(k + 2);
  return out;
}

Density energy_shallow(int k, int max_degree) {
  if (k < 0) throw std::invalid_argument("energy_shallow: k >= 0 required");
  Density out(Regime::Shallow, true);
  if (k == 0) {
    out = h_tilde(1, max_degree).integrate() * ratio(-1, 2);
    out.set_declared_rank(2);
    return out;
  }
  const int kappa = (k + 1) / 2;
  const int sgn = (kappa % 2 == 1) ? 1 : -1;  // (−1)^{κ+1}
  if (k % 2 == 1) {
    out = h_tilde(2 * kappa, max_degree).integrate().real_part() * (Rational(3 * sgn) / Rational(4 * kappa));
  } else {
    out = h_tilde(2 * kappa + 1, max_degree).integrate().real_part() * ratio(sgn, 2);
  }
  out.set_declared_rank(kappa + 2);
  return out;
}

Density energy_kdv(int kappa, int max_degree) {
  if (kappa < 0) throw std::invalid_argument("energy_kdv: kappa >= 0 required");
  const int sgn = (kappa % 2 == 0) ? 1 : -1;
  Density out = h_kdv(2 * kappa + 2, max_degree).integrate() * ratio(sgn, 2);
  out.set_declared_rank(kappa + 2);
  return out;
}

Density delta_free_part(const Density& d) {
  if (d.regime() == Regime::Deep) {
    Density out = d.filtered([](const TermKey& k) {
      if (k.dpow != 0) return false;
      for (const Block& b : k.blocks)
        if (b.kind == BlockKind::Q) return false;
      return true;
    });
    Density res(Regime::BO, d.integrated());
    res += out;
    if (d.declared_rank()) res.set_declared_rank(*d.declared_rank());
    return res;
  }
  if (d.regime() == Regime::Shallow) {
    Density res(Regime::KdV, d.integrated());
    for (const auto& [k, p] : d.terms()) {
      if (k.dpow != 0) continue;
      TermKey key{k.degree, k.ipow, 0, {}};
      Poly poly = p;
      for (const Block& b : k.blocks) {
        if (b.kind != BlockKind::GTilde) throw std::logic_error("delta_free_part: unexpected block in shallow density");
        poly = poly * Poly::linear(b.mask) * ratio(1, 3);
      }
      res.add(std::move(key), std::move(poly));
    }
    if (d.declared_rank()) res.set_declared_rank(*d.declared_rank());
    return res;
  }
  return d;
}

Density interaction_part(const Density& d) {
  return d.filtered([](const TermKey& k) { return k.degree >= 3; });
}

}  // namespace ilw::sym
