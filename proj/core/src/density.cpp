#include "ilw/density.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace ilw::sym {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Deep: return "deep";
    case Regime::BO: return "bo";
    case Regime::Shallow: return "shallow";
    case Regime::KdV: return "kdv";
  }
  return "?";
}

Regime regime_from_string(const std::string& s) {
  if (s == "deep") return Regime::Deep;
  if (s == "bo") return Regime::BO;
  if (s == "shallow") return Regime::Shallow;
  if (s == "kdv") return Regime::KdV;
  throw std::invalid_argument("unknown regime '" + s + "' (expected deep, bo, shallow or kdv)");
}

bool is_shallow(Regime r) { return r == Regime::Shallow || r == Regime::KdV; }

bool is_odd(BlockKind k) { return k == BlockKind::Sign || k == BlockKind::GTilde; }

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Sign: return "sgn";
    case BlockKind::Q: return "Q";
    case BlockKind::GTilde: return "gt";
    case BlockKind::HighPass: return "P>N";
  }
  return "?";
}

namespace {

std::uint16_t full_mask(int d) { return static_cast<std::uint16_t>((1u << d) - 1u); }

std::uint16_t map_mask(std::uint16_t mask, std::span<const int> perm) {
  std::uint16_t out = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (mask & (1u << i)) out = static_cast<std::uint16_t>(out | (1u << perm[i]));
  return out;
}

// Representative of {S, S^c} on the hyperplane Σn = 0; odd blocks flip sign.
Block complement_normal(Block b, int d, int& sign) {
  const int pc = std::popcount(static_cast<unsigned>(b.mask));
  if (2 * pc > d || (2 * pc == d && !(b.mask & 1u))) {
    b.mask = static_cast<std::uint16_t>(full_mask(d) ^ b.mask);
    if (is_odd(b.kind)) sign = -sign;
  }
  return b;
}

void drop_sign_pairs(std::vector<Block>& blocks) {
  std::sort(blocks.begin(), blocks.end());
  std::vector<Block> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].kind == BlockKind::Sign && i + 1 < blocks.size() && blocks[i + 1] == blocks[i]) {
      ++i;
      continue;
    }
    out.push_back(blocks[i]);
  }
  blocks = std::move(out);
}

// Blocks mapped through perm, normalized and sorted.  Returns overall sign.
int relabel_blocks(const std::vector<Block>& blocks, std::span<const int> perm, int d, bool integrated,
                   std::vector<Block>& out) {
  out.clear();
  int sign = 1;
  for (const Block& b : blocks) {
    Block m{b.kind, map_mask(b.mask, perm)};
    if (integrated) m = complement_normal(m, d, sign);
    out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return sign;
}

struct LabelSearch {
  std::vector<int> best_perm;
  int best_sign = 1;
  std::vector<Block> best_blocks;
  std::vector<std::pair<std::vector<int>, int>> optimal;  // all perms reaching best_blocks
};

// Enumerate permutations that respect leaf-signature classes and keep those
// minimizing the relabelled block list.
LabelSearch search_labels(const std::vector<Block>& blocks, int d, bool integrated) {
  using Sig = std::vector<std::tuple<int, int, int>>;
  std::vector<Sig> sig(static_cast<std::size_t>(d));
  for (const Block& b : blocks) {
    const int pc = std::popcount(static_cast<unsigned>(b.mask));
    if (integrated && 2 * pc == d) {
      for (int i = 0; i < d; ++i) sig[static_cast<std::size_t>(i)].emplace_back(static_cast<int>(b.kind), pc, 2);
      continue;
    }
    for (int i = 0; i < d; ++i) {
      if (b.mask & (1u << i)) sig[static_cast<std::size_t>(i)].emplace_back(static_cast<int>(b.kind), pc, 1);
    }
  }
  for (auto& s : sig) std::sort(s.begin(), s.end());
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sig[static_cast<std::size_t>(a)] < sig[static_cast<std::size_t>(b)]; });

  // classes as contiguous ranges of `order`
  std::vector<std::pair<int, int>> classes;
  for (int i = 0; i < d;) {
    int j = i + 1;
    while (j < d && sig[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] == sig[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]) ++j;
    classes.emplace_back(i, j);
    i = j;
  }

  long long count = 1;
  for (auto [a, b] : classes)
    for (int t = 2; t <= b - a; ++t) count *= t;
  if (count > 4'000'000) throw std::runtime_error("canonical relabelling search too large");

  // `slot` is the arrangement: slot[pos] = old leaf placed at new position pos.
  std::vector<int> slot = order;
  for (auto [a, b] : classes) std::sort(slot.begin() + a, slot.begin() + b);

  LabelSearch res;
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::vector<Block> mapped;
  bool first = true;
  while (true) {
    for (int pos = 0; pos < d; ++pos) perm[static_cast<std::size_t>(slot[static_cast<std::size_t>(pos)])] = pos;
    const int sign = relabel_blocks(blocks, perm, d, integrated, mapped);
    if (first || mapped < res.best_blocks) {
      res.best_blocks = mapped;
      res.best_perm = perm;
      res.best_sign = sign;
      res.optimal.clear();
      res.optimal.emplace_back(perm, sign);
      first = false;
    } else if (mapped == res.best_blocks) {
      res.optimal.emplace_back(perm, sign);
    }
    // odometer over classes
    std::size_t c = 0;
    for (; c < classes.size(); ++c) {
      auto [a, b] = classes[c];
      if (std::next_permutation(slot.begin() + a, slot.begin() + b)) break;
    }
    if (c == classes.size()) break;
  }
  return res;
}

std::vector<int> compose_inverse(const std::vector<int>& pi, const std::vector<int>& pi0) {
  // σ = π ∘ π0⁻¹ : new index under π0 -> new index under π
  std::vector<int> sigma(pi.size());
  for (std::size_t old = 0; old < pi.size(); ++old) sigma[static_cast<std::size_t>(pi0[old])] = pi[old];
  return sigma;
}

std::vector<Symmetry> symmetries_from(const LabelSearch& s) {
  std::vector<Symmetry> out;
  for (const auto& [pi, sign] : s.optimal) {
    out.push_back({compose_inverse(pi, s.best_perm), sign * s.best_sign});
  }
  // identity first
  auto it = std::find_if(out.begin(), out.end(), [](const Symmetry& sy) {
    for (std::size_t i = 0; i < sy.perm.size(); ++i)
      if (sy.perm[i] != static_cast<int>(i)) return false;
    return true;
  });
  if (it != out.end()) std::iter_swap(out.begin(), it);
  return out;
}

// Fully symmetric average of a block-free polynomial over S_d.
Poly symmetric_average(const Poly& p, int d) {
  Poly out;
  std::vector<unsigned> e(static_cast<std::size_t>(d));
  for (const auto& [m, c] : p.terms()) {
    for (int i = 0; i < d; ++i) e[static_cast<std::size_t>(i)] = m.exp(i);
    std::sort(e.begin(), e.end());
    std::vector<Mono> images;
    do {
      Mono r;
      for (int i = 0; i < d; ++i) r = r.with_exp(i, e[static_cast<std::size_t>(i)]);
      images.push_back(r);
    } while (std::next_permutation(e.begin(), e.end()));
    const Rational share = c / static_cast<long>(images.size());
    for (Mono r : images) out.add(r, share);
  }
  return out;
}

Poly sorted_exponents(const Poly& p, int d) {
  Poly out;
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

Poly orbit_minimum(const Poly& p, const std::vector<Symmetry>& group) {
  if (group.size() <= 1) return p;
  Poly out;
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

Poly group_average(const Poly& p, const std::vector<Symmetry>& group) {
  if (group.size() <= 1) return p;
  Poly out;
  const Rational w = ratio(1, static_cast<long>(group.size()));
  for (const auto& g : group) {
    Poly img = p.permuted(g.perm);
    img *= w * g.sign;
    out += img;
  }
  return out;
}

}  // namespace

std::vector<std::pair<TermKey, Poly>> canonical_terms(TermKey key, Poly poly, bool integrated) {
  std::vector<std::pair<TermKey, Poly>> out;
  int p = ((key.ipow % 4) + 4) % 4;
  if (p >= 2) {
    poly *= -1;
    p -= 2;
  }
  key.ipow = p;
  if (poly.is_zero()) return out;
  const int d = key.degree;
  if (integrated) {
    if (d == 1) return out;
    int sign = 1;
    for (Block& b : key.blocks) {
      if (b.mask == full_mask(d)) return out;
      b = complement_normal(b, d, sign);
    }
    if (sign < 0) poly *= -1;
  }
  drop_sign_pairs(key.blocks);

  if (key.blocks.empty()) {
    if (!integrated) {
      out.emplace_back(std::move(key), sorted_exponents(poly, d));
    } else {
      Poly red = symmetric_average(poly, d).reduced_on_hyperplane(d);
      if (!red.is_zero()) out.emplace_back(std::move(key), std::move(red));
    }
    return out;
  }

  LabelSearch s = search_labels(key.blocks, d, integrated);
  std::vector<Block> blocks = s.best_blocks;
  drop_sign_pairs(blocks);
  Poly relabelled = poly.permuted(s.best_perm);
  if (s.best_sign < 0) relabelled *= -1;
  if (blocks.size() != s.best_blocks.size()) {
    // complement normalization produced s² pairs: restart on the reduced shape
    TermKey k2{d, key.ipow, key.dpow, blocks};
    return canonical_terms(std::move(k2), std::move(relabelled), integrated);
  }
  key.blocks = std::move(blocks);
  const auto group = symmetries_from(s);
  Poly canon = integrated ? group_average(relabelled, group).reduced_on_hyperplane(d) : orbit_minimum(relabelled, group);
  if (!canon.is_zero()) out.emplace_back(std::move(key), std::move(canon));
  return out;
}

std::vector<Symmetry> key_symmetries(const TermKey& key, bool integrated) {
  const int d = key.degree;
  if (key.blocks.empty()) {
    // S_d; callers needing the whole group for small d only
    std::vector<Symmetry> out;
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    do out.push_back({perm, 1});
    while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }
  return symmetries_from(search_labels(key.blocks, d, integrated));
}

Poly symmetrize(const TermKey& key, const Poly& poly) {
  if (key.blocks.empty()) return symmetric_average(poly, key.degree);
  return group_average(poly, key_symmetries(key, true));
}

// ---------------------------------------------------------------------------

Density Density::leaf(Regime r) {
  Density d(r);
  d.add_raw(TermKey{1, 0, 0, {}}, Poly::constant(1));
  return d;
}

Density Density::constant(Regime r, const Rational& c) {
  Density d(r);
  d.add_raw(TermKey{0, 0, 0, {}}, Poly::constant(c));
  return d;
}

std::size_t Density::monomial_count() const {
  std::size_t n = 0;
  for (const auto& [k, p] : terms_) n += p.size();
  return n;
}

void Density::add_raw(const TermKey& key, const Poly& poly) {
  if (poly.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, poly);
  if (!inserted) {
    it->second += poly;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Density::add(TermKey key, Poly poly) {
  for (auto& [k, p] : canonical_terms(std::move(key), std::move(poly), integrated_)) add_raw(k, p);
}

Density& Density::operator+=(const Density& other) {
  if (other.integrated_ != integrated_) throw std::logic_error("adding integrated and pointwise densities");
  for (const auto& [k, p] : other.terms_) add_raw(k, p);
  return *this;
}

Density& Density::operator-=(const Density& other) {
  if (other.integrated_ != integrated_) throw std::logic_error("subtracting integrated and pointwise densities");
  for (const auto& [k, p] : other.terms_) add_raw(k, p * Rational(-1));
  return *this;
}

Density Density::operator+(const Density& other) const {
  Density out = *this;
  out += other;
  return out;
}

Density Density::operator-(const Density& other) const {
  Density out = *this;
  out -= other;
  return out;
}

Density Density::operator*(const Rational& c) const {
  Density out(regime_, integrated_);
  out.rank_ = rank_;
  if (c == 0) return out;
  for (const auto& [k, p] : terms_) out.terms_.emplace(k, p * c);
  return out;
}

Density Density::times_i(int power) const {
  Density out(regime_, integrated_);
  out.rank_ = rank_;
  for (const auto& [k, p] : terms_) {
    TermKey key = k;
    key.ipow += power;
    Poly poly = p;
    int q = ((key.ipow % 4) + 4) % 4;
    if (q >= 2) {
      poly *= -1;
      q -= 2;
    }
    key.ipow = q;
    out.add_raw(key, poly);
  }
  return out;
}

Density Density::times_delta(int power) const {
  Density out(regime_, integrated_);
  out.rank_ = rank_;
  for (const auto& [k, p] : terms_) {
    TermKey key = k;
    key.dpow += power;
    out.terms_.emplace(std::move(key), p);
  }
  return out;
}

bool Density::operator==(const Density& other) const {
  return integrated_ == other.integrated_ && terms_ == other.terms_;
}

Density Density::multiply(const Density& other, int max_degree) const {
  if (integrated_ || other.integrated_) throw std::logic_error("multiply: pointwise densities only");
  Density out(regime_);
  for (const auto& [ka, pa] : terms_) {
    for (const auto& [kb, pb] : other.terms_) {
      const int d = ka.degree + kb.degree;
      if (d > max_degree) continue;
      if (d > Mono::kMaxVars) throw std::overflow_error("monomial degree exceeds 16 factors");
      TermKey key{d, ka.ipow + kb.ipow, ka.dpow + kb.dpow, ka.blocks};
      for (const Block& b : kb.blocks) key.blocks.push_back({b.kind, static_cast<std::uint16_t>(b.mask << ka.degree)});
      out.add(std::move(key), pa * pb.shifted(ka.degree));
    }
  }
  return out;
}

Density Density::dx() const {
  if (integrated_) return Density(regime_, true);
  Density out(regime_);
  for (const auto& [k, p] : terms_) {
    if (k.degree == 0) continue;
    TermKey key = k;
    key.ipow += 1;
    out.add(std::move(key), p * Poly::linear(full_mask(k.degree)));
  }
  return out;
}

Density Density::block_op(BlockKind kind) const {
  if (integrated_) throw std::logic_error("operators act on pointwise densities");
  Density out(regime_);
  for (const auto& [k, p] : terms_) {
    if (k.degree == 0) continue;
    TermKey key = k;
    key.blocks.push_back({kind, full_mask(k.degree)});
    out.add(std::move(key), p);
  }
  return out;
}

Density Density::hilbert_dx() const {
  Density out(regime_);
  for (const auto& [k, p] : terms_) {
    if (k.degree == 0) continue;
    TermKey key = k;
    key.blocks.push_back({BlockKind::Sign, full_mask(k.degree)});
    out.add(std::move(key), p * Poly::linear(full_mask(k.degree)));
  }
  return out;
}

Density Density::q_op() const { return block_op(BlockKind::Q); }

Density Density::gtilde_dx() const {
  Density out(regime_);
  for (const auto& [k, p] : terms_) {
    if (k.degree == 0) continue;
    TermKey key = k;
    key.blocks.push_back({BlockKind::GTilde, full_mask(k.degree)});
    out.add(std::move(key), p * Poly::linear(full_mask(k.degree)));
  }
  return out;
}

Density Density::hilbert() const { return block_op(BlockKind::Sign).times_i(-1); }

Density Density::gtilde() const { return block_op(BlockKind::GTilde).times_i(-1); }

Density Density::degree_part(int d) const {
  return filtered([d](const TermKey& k) { return k.degree == d; });
}

Density Density::max_degree_part(int d) const {
  return filtered([d](const TermKey& k) { return k.degree <= d; });
}

Density Density::integrate() const {
  if (integrated_) return *this;
  Density out(regime_, true);
  out.rank_ = rank_;
  for (const auto& [k, p] : terms_) {
    if (k.degree == 0) throw std::logic_error("integrate: constant term has no torus-mean-zero meaning");
    out.add(k, p);
  }
  return out;
}

Density Density::real_part() const {
  if (!integrated_) throw std::logic_error("real_part: integrated densities only");
  Density out(regime_, true);
  out.rank_ = rank_;
  for (const auto& [k, p] : terms_) {
    int odd = k.ipow;
    for (const Block& b : k.blocks) odd += is_odd(b.kind) ? 1 : 0;
    Poly kept;
    for (const auto& [m, c] : p.terms())
      if ((odd + static_cast<int>(m.degree())) % 2 == 0) kept.add(m, c);
    out.add_raw(k, kept);
  }
  return out;
}

}  // namespace ilw::sym
