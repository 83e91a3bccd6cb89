#include "ilw/present.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

#include "ilw/evaluate.hpp"

namespace ilw::sym {

std::string to_string(Op op) {
  switch (op) {
    case Op::Dx: return "Dx";
    case Op::Hilbert: return "Hilbert";
    case Op::Q: return "Qdelta";
    case Op::GTilde: return "GdeltaTilde";
    case Op::ProjHigh: return "ProjHigh";
  }
  return "?";
}

Expr Expr::apply(Op op, Expr child) {
  Expr e;
  e.kind = Kind::Apply;
  e.op = op;
  e.children.push_back(std::move(child));
  return e;
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.size() == 1) return std::move(factors.front());
  Expr e;
  e.kind = Kind::Product;
  e.children = std::move(factors);
  return e;
}

namespace {

void tally(const Expr& e, Counters& c) {
  switch (e.kind) {
    case Expr::Kind::Leaf: ++c.leaves; return;
    case Expr::Kind::Apply:
      switch (e.op) {
        case Op::Dx: ++c.derivatives; break;
        case Op::Hilbert: ++c.sign_blocks; break;
        case Op::Q: ++c.q_blocks; break;
        case Op::GTilde: ++c.gtilde_blocks; break;
        case Op::ProjHigh: ++c.high_pass; break;
      }
      break;
    case Expr::Kind::Product: break;
  }
  for (const Expr& ch : e.children) tally(ch, c);
}

Op op_of(BlockKind k) {
  switch (k) {
    case BlockKind::Sign: return Op::Hilbert;
    case BlockKind::Q: return Op::Q;
    case BlockKind::GTilde: return Op::GTilde;
    case BlockKind::HighPass: return Op::ProjHigh;
  }
  return Op::Dx;
}

struct TreeBuilder {
  int degree;
  std::map<std::uint16_t, std::vector<BlockKind>> blocks;
  std::vector<unsigned> exps;

  Expr leaf(int i) const {
    Expr e = Expr::leaf();
    for (unsigned a = 0; a < exps[static_cast<std::size_t>(i)]; ++a) e = Expr::apply(Op::Dx, std::move(e));
    return e;
  }

  Expr build(std::uint16_t mask) const {
    // maximal proper sub-blocks
    std::vector<std::uint16_t> kids;
    for (const auto& [m, kinds] : blocks) {
      if (m == mask || (m & mask) != m) continue;
      bool maximal = true;
      for (const auto& [o, ok] : blocks)
        if (o != m && o != mask && (o & mask) == o && (o & m) == m) maximal = false;
      if (maximal) kids.push_back(m);
    }
    std::uint16_t covered = 0;
    for (auto k : kids) covered = static_cast<std::uint16_t>(covered | k);
    std::vector<std::pair<int, Expr>> factors;
    for (auto k : kids) factors.emplace_back(std::countr_zero(static_cast<unsigned>(k)), build(k));
    for (int i = 0; i < degree; ++i)
      if ((mask & (1u << i)) && !(covered & (1u << i))) factors.emplace_back(i, leaf(i));
    std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Expr> fs;
    for (auto& [i, e] : factors) fs.push_back(std::move(e));
    Expr e = Expr::product(std::move(fs));
    auto it = blocks.find(mask);
    if (it != blocks.end()) {
      std::vector<BlockKind> kinds = it->second;
      std::sort(kinds.begin(), kinds.end());
      for (BlockKind k : kinds) e = Expr::apply(op_of(k), std::move(e));
    }
    return e;
  }
};

// A leaf under derivatives only; printed without parentheses.
bool simple(const Expr& e) {
  if (e.kind == Expr::Kind::Leaf) return true;
  return e.kind == Expr::Kind::Apply && e.op == Op::Dx && simple(e.children.front());
}

std::string op_symbol(Op op) {
  switch (op) {
    case Op::Dx: return "∂";
    case Op::Hilbert: return "H";
    case Op::Q: return "Q";
    case Op::GTilde: return "G~";
    case Op::ProjHigh: return "P>N";
  }
  return "?";
}

}  // namespace

Counters count(const Monomial& m) {
  Counters c;
  tally(m.body, c);
  c.delta = m.dpow;
  return c;
}

std::vector<Monomial> present(const Density& d) {
  std::vector<Monomial> out;
  const bool integ = d.integrated();
  for (const auto& [key, poly] : d.terms()) {
    if (key.degree == 0) {
      for (const auto& [m, c] : poly.terms()) out.push_back({c, key.ipow, key.dpow, Expr::leaf()});
      continue;
    }
    const auto full = static_cast<std::uint16_t>((1u << key.degree) - 1u);
    const std::uint32_t flips = integ ? laminar_flips(key) : 0u;
    int sign = 1;
    int odd = 0;
    TreeBuilder tb{key.degree, {}, {}};
    for (std::size_t j = 0; j < key.blocks.size(); ++j) {
      const Block& b = key.blocks[j];
      std::uint16_t m = b.mask;
      if ((flips >> j) & 1u) {
        m = static_cast<std::uint16_t>(full ^ m);
        if (is_odd(b.kind)) sign = -sign;
      }
      if (is_odd(b.kind)) ++odd;
      tb.blocks[m].push_back(b.kind);
    }
    const Poly shown = integ ? minimal_representative(key, poly).poly : poly;
    for (const auto& [m, c] : shown.terms()) {
      tb.exps.assign(static_cast<std::size_t>(key.degree), 0);
      for (int i = 0; i < key.degree; ++i) tb.exps[static_cast<std::size_t>(i)] = m.exp(i);
      // n^e = (−i∂)^e, Sign = iH, GTilde = iG̃
      int ip = key.ipow + odd - static_cast<int>(m.degree());
      ip = ((ip % 4) + 4) % 4;
      Rational coeff = c * sign;
      if (ip >= 2) {
        coeff = -coeff;
        ip -= 2;
      }
      out.push_back({coeff, ip, key.dpow, tb.build(full)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) { return a.dpow > b.dpow; });
  return out;
}

std::string to_string(const Expr& e, bool shallow) {
  switch (e.kind) {
    case Expr::Kind::Leaf: return shallow ? "v" : "u";
    case Expr::Kind::Apply: {
      if (e.op == Op::Dx) {
        int k = 0;
        const Expr* x = &e;
        while (x->kind == Expr::Kind::Apply && x->op == Op::Dx) {
          ++k;
          x = &x->children.front();
        }
        const std::string d = k == 1 ? "∂" : "∂^" + std::to_string(k);
        return simple(*x) ? d + to_string(*x, shallow) : d + "(" + to_string(*x, shallow) + ")";
      }
      const Expr& ch = e.children.front();
      return simple(ch) ? op_symbol(e.op) + to_string(ch, shallow) : op_symbol(e.op) + "(" + to_string(ch, shallow) + ")";
    }
    case Expr::Kind::Product: {
      std::string s;
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) s += "·";
        const Expr& ch = e.children[i];
        s += ch.kind == Expr::Kind::Product ? "(" + to_string(ch, shallow) + ")" : to_string(ch, shallow);
      }
      return s;
    }
  }
  return "?";
}

std::string to_string(const Monomial& m, bool integrated, bool shallow) {
  std::ostringstream os;
  os << m.coeff.get_str();
  if (m.ipow == 1) os << "·i";
  if (m.dpow != 0) os << "·δ^" << m.dpow;
  os << (integrated ? " ∫ " : " ") << to_string(m.body, shallow);
  return os.str();
}

std::string to_string(const Density& d) {
  const bool shallow = is_shallow(d.regime());
  std::ostringstream os;
  const auto ms = present(d);
  if (ms.empty()) return "0\n";
  for (const auto& m : ms) {
    std::string line = to_string(m, d.integrated(), shallow);
    if (line.front() != '-') line = "+" + line;
    os << line << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const Rational& q) {
  nlohmann::json j;
  auto put = [](const mpz_class& z) -> nlohmann::json {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
  };
  j["num"] = put(q.get_num());
  j["den"] = put(q.get_den());
  return j;
}

nlohmann::json to_json(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Leaf: return {{"leaf", "u"}};
    case Expr::Kind::Apply: return {{"op", to_string(e.op)}, {"arg", to_json(e.children.front())}};
    case Expr::Kind::Product: {
      nlohmann::json arr = nlohmann::json::array();
      for (const Expr& c : e.children) arr.push_back(to_json(c));
      return {{"product", arr}};
    }
  }
  return {};
}

nlohmann::json to_json(const Monomial& m) {
  return {{"coeff", to_json(m.coeff)}, {"ipow", m.ipow}, {"dpow", m.dpow}, {"body", to_json(m.body)}};
}

nlohmann::json to_json(const Density& d) {
  nlohmann::json j;
  j["regime"] = to_string(d.regime());
  j["integrated"] = d.integrated();
  if (d.declared_rank()) j["declared_rank"] = to_json(*d.declared_rank());
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& m : present(d)) arr.push_back(to_json(m));
  j["monomials"] = arr;
  return j;
}

}  // namespace ilw::sym
