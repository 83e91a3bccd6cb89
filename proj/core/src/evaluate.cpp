#include "ilw/evaluate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "ilw/fft.hpp"
#include "ilw/multipliers.hpp"

namespace ilw::sym {

namespace {

bool laminar(const std::vector<std::uint16_t>& masks) {
  for (std::size_t a = 0; a < masks.size(); ++a) {
    for (std::size_t b = a + 1; b < masks.size(); ++b) {
      const auto x = masks[a], y = masks[b];
      const auto both = static_cast<std::uint16_t>(x & y);
      if (both != 0 && both != x && both != y) return false;
    }
  }
  return true;
}

// Orbit-minimum compression: T(σm) = ε T(m) lets each orbit collapse onto one monomial.
Poly compress(const TermKey& key, const Poly& p) {
  const int d = key.degree;
  Poly out;
  if (key.blocks.empty()) {
    std::vector<unsigned> e(static_cast<std::size_t>(d));
    for (const auto& [m, c] : p.terms()) {
      for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i)] = m.exp(i);
      std::sort(e.begin(), e.end());
      Mono r;
      for (int i = 0; i < d; ++i) r = r.with_exp(i, e[static_cast<std::size_t>(i)]);
      out.add(r, c);
    }
    return out;
  }
  const auto group = key_symmetries(key, true);
  for (const auto& [m, c] : p.terms()) {
    Mono best = m;
    int best_sign = 1;
    bool conflict = false;
    for (const auto& g : group) {
      const Mono img = m.permuted(g.perm);
      if (img < best) {
        best = img;
        best_sign = g.sign;
        conflict = false;
      } else if (img == best && g.sign != best_sign) {
        conflict = true;
      }
    }
    if (!conflict) out.add(best, best_sign * c);
  }
  return out;
}

class Grid {
 public:
  Grid(const SpectralField& u, int max_degree, const EvalParams& p)
      : k_(u.cutoff()), m_(fft::good_size(static_cast<std::size_t>(2 * std::max(1, max_degree) * std::max(1L, k_) + 1))),
        u_(u), params_(p) {}

  std::size_t size() const { return m_; }

  long freq(std::size_t j) const {
    const long ml = static_cast<long>(m_);
    const long jl = static_cast<long>(j);
    return jl <= ml / 2 ? jl : jl - ml;
  }

  const std::vector<cplx>& leaf(unsigned e) {
    auto it = leaves_.find(e);
    if (it != leaves_.end()) return it->second;
    std::vector<cplx> a(m_);
    const long ml = static_cast<long>(m_);
    for (long n = -k_; n <= k_; ++n) {
      if (n == 0) continue;
      a[static_cast<std::size_t>((n + ml) % ml)] = std::pow(static_cast<double>(n), static_cast<int>(e)) * u_[n];
    }
    fft::backward(a);
    const double s = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (auto& v : a) v *= s;
    return leaves_.emplace(e, std::move(a)).first->second;
  }

  const std::vector<double>& multiplier(BlockKind kind) {
    auto it = mults_.find(kind);
    if (it != mults_.end()) return it->second;
    std::vector<double> w(m_);
    for (std::size_t j = 0; j < m_; ++j) {
      const long f = freq(j);
      if (f == 0) continue;
      switch (kind) {
        case BlockKind::Sign: w[j] = f > 0 ? 1.0 : -1.0; break;
        case BlockKind::Q: w[j] = q_delta_real(params_.delta, f); break;
        case BlockKind::GTilde: w[j] = g_tilde_real(params_.delta, f); break;
        case BlockKind::HighPass: w[j] = std::abs(f) > *params_.high_cutoff ? 1.0 : 0.0; break;
      }
    }
    return mults_.emplace(kind, std::move(w)).first->second;
  }

 private:
  long k_;
  std::size_t m_;
  const SpectralField& u_;
  EvalParams params_;
  std::map<unsigned, std::vector<cplx>> leaves_;
  std::map<BlockKind, std::vector<double>> mults_;
};

}  // namespace

std::uint32_t laminar_flips(const TermKey& key) {
  const int d = key.degree;
  const auto full = static_cast<std::uint16_t>((1u << d) - 1u);
  const std::size_t b = key.blocks.size();
  std::vector<std::uint32_t> order(std::size_t{1} << b);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [](std::uint32_t x, std::uint32_t y) { return std::popcount(x) < std::popcount(y); });
  std::vector<std::uint16_t> masks(b);
  for (std::uint32_t flips : order) {
    for (std::size_t j = 0; j < b; ++j) {
      const auto m = key.blocks[j].mask;
      masks[j] = (flips >> j) & 1u ? static_cast<std::uint16_t>(full ^ m) : m;
    }
    if (laminar(masks)) return flips;
  }
  throw EvaluationError("no laminar operator tree for a monomial shape");
}

CompiledDensity::CompiledDensity(const Density& d) {
  if (!d.integrated()) throw EvaluationError("evaluate: density must be integrated");
  for (const auto& [key, poly] : d.terms()) {
    Shape sh;
    sh.degree = key.degree;
    sh.dpow = key.dpow;
    max_degree_ = std::max(max_degree_, key.degree);
    if (key.dpow != 0) needs_delta_ = true;
    const auto full = static_cast<std::uint16_t>((1u << key.degree) - 1u);
    const std::uint32_t flips = laminar_flips(key);
    double sign = 1.0;
    std::map<std::uint16_t, std::vector<BlockKind>> by_mask;
    for (std::size_t j = 0; j < key.blocks.size(); ++j) {
      const Block& b = key.blocks[j];
      std::uint16_t m = b.mask;
      if ((flips >> j) & 1u) {
        m = static_cast<std::uint16_t>(full ^ m);
        if (is_odd(b.kind)) sign = -sign;
      }
      by_mask[m].push_back(b.kind);
      if (b.kind == BlockKind::Q || b.kind == BlockKind::GTilde) needs_delta_ = true;
      if (b.kind == BlockKind::HighPass) needs_cutoff_ = true;
    }
    sh.prefactor = (key.ipow == 1 ? cplx(0, 1) : cplx(1, 0)) * sign;

    // nodes sorted by size so children come first; root = full set
    std::vector<std::uint16_t> masks;
    for (const auto& [m, kinds] : by_mask) masks.push_back(m);
    std::sort(masks.begin(), masks.end(), [](auto x, auto y) { return std::popcount(x) < std::popcount(y); });
    masks.push_back(full);
    sh.nodes.resize(masks.size());
    for (std::size_t a = 0; a < masks.size(); ++a) {
      sh.nodes[a].mask = masks[a];
      if (a + 1 < masks.size()) sh.nodes[a].multipliers = by_mask[masks[a]];
    }
    auto parent_of = [&](std::uint16_t m, std::size_t self) -> int {
      for (std::size_t a = 0; a < masks.size(); ++a) {
        if (a == self) continue;
        if ((masks[a] & m) == m && masks[a] != m) return static_cast<int>(a);  // first = smallest superset
      }
      return -1;
    };
    for (std::size_t a = 0; a + 1 < masks.size(); ++a) sh.nodes[static_cast<std::size_t>(parent_of(masks[a], a))].children.push_back(static_cast<int>(a));
    for (int leaf = 0; leaf < key.degree; ++leaf) {
      for (std::size_t a = 0; a < masks.size(); ++a) {
        if (masks[a] & (1u << leaf)) {
          sh.nodes[a].leaves.push_back(leaf);
          break;
        }
      }
    }
    const Poly compressed = compress(key, poly);
    for (const auto& [m, c] : compressed.terms()) {
      std::vector<unsigned> e(static_cast<std::size_t>(key.degree));
      for (int i = 0; i < key.degree; ++i) e[static_cast<std::size_t>(i)] = m.exp(i);
      sh.monomials.emplace_back(std::move(e), c.get_d());
    }
    shapes_.push_back(std::move(sh));
  }
}

std::complex<double> CompiledDensity::evaluate_complex(const SpectralField& u, const EvalParams& p) const {
  if (needs_delta_ && !(p.delta > 0.0)) throw EvaluationError("evaluate: density depends on delta but no positive delta was given");
  if (needs_cutoff_ && (!p.high_cutoff || *p.high_cutoff < 0)) throw EvaluationError("evaluate: density carries P_{>N} but no cutoff N was given");
  if (shapes_.empty() || u.cutoff() == 0) return {};
  Grid grid(u, max_degree_, p);
  const std::size_t m = grid.size();
  const double two_pi = 2.0 * std::numbers::pi;
  cplx total{};
  std::vector<std::vector<cplx>> vals;
  for (const Shape& sh : shapes_) {
    const double dfac = sh.dpow == 0 ? 1.0 : std::pow(p.delta, sh.dpow);
    vals.assign(sh.nodes.size(), {});
    for (const auto& [e, c] : sh.monomials) {
      for (std::size_t a = 0; a < sh.nodes.size(); ++a) {
        const Node& nd = sh.nodes[a];
        std::vector<cplx>& v = vals[a];
        v.assign(m, cplx(1.0, 0.0));
        for (int leaf : nd.leaves) {
          const auto& arr = grid.leaf(e[static_cast<std::size_t>(leaf)]);
          for (std::size_t j = 0; j < m; ++j) v[j] *= arr[j];
        }
        for (int ch : nd.children) {
          const auto& arr = vals[static_cast<std::size_t>(ch)];
          for (std::size_t j = 0; j < m; ++j) v[j] *= arr[j];
        }
        if (!nd.multipliers.empty()) {
          fft::forward(v);
          for (BlockKind k : nd.multipliers) {
            const auto& w = grid.multiplier(k);
            for (std::size_t j = 0; j < m; ++j) v[j] *= w[j];
          }
          fft::backward(v);
          const double s = 1.0 / static_cast<double>(m);
          for (auto& x : v) x *= s;
        }
      }
      const auto& root = vals.back();
      cplx acc{};
      for (const auto& x : root) acc += x;
      total += sh.prefactor * dfac * c * acc * (two_pi / static_cast<double>(m));
    }
  }
  return total;
}

double CompiledDensity::evaluate(const SpectralField& u, const EvalParams& p) const {
  const cplx z = evaluate_complex(u, p);
  const double scale = std::max(1.0, std::abs(z.real()));
  if (std::abs(z.imag()) > 1e-9 * scale) {
    throw EvaluationError("evaluate: imaginary residue " + std::to_string(z.imag()) + " exceeds tolerance");
  }
  return z.real();
}

double evaluate(const Density& d, const SpectralField& u, const EvalParams& p) { return CompiledDensity(d).evaluate(u, p); }

}  // namespace ilw::sym
