#include <cmath>
#include <sstream>

#include "commands.hpp"
#include "ilw/analysis.hpp"
#include "ilw/evaluate.hpp"
#include "ilw/hierarchy.hpp"
#include "ilw/present.hpp"

namespace ilwcli {

namespace {

using namespace ilw;
using sym::Density;
using sym::Regime;

struct ShowArgs {
  std::string regime = "deep";
  int k = 2;
  std::string delta = "sym";
  std::string law = "energy";
  std::string field;
};

Density select_law(Regime r, const std::string& law, int k) {
  if (law == "energy") {
    switch (r) {
      case Regime::Deep: return sym::energy_deep(k);
      case Regime::BO: return sym::energy_bo(k);
      case Regime::Shallow: return sym::energy_shallow(k);
      case Regime::KdV: return sym::energy_kdv(k);
    }
  }
  require(law == "micro", "law must be energy or micro");
  require(k >= 1, "microscopic laws are indexed from 1");
  switch (r) {
    case Regime::Deep: return sym::chi_deep(k);
    case Regime::BO: return sym::chi_bo(k);
    case Regime::Shallow: return sym::h_tilde(k);
    case Regime::KdV: return sym::h_kdv(k);
  }
  return {};
}

int run_show(const Session& s, const ShowArgs& a, json config) {
  const Regime r = parse_regime(a.regime);
  require(a.k >= 0 && a.k <= 8, "k must lie in 0..8");
  require(!(r == Regime::KdV && a.law == "energy" && a.k < 1), "kdv energies are indexed from 1");
  const Density d = select_law(r, a.law, a.k);
  Report rep(s, "conslaw show", std::move(config));
  json out = {{"density", sym::to_json(d)}, {"normal_form", sym::to_string(d)}};
  rep.say(sym::to_string(d));
  if (a.delta != "sym") {
    double delta = 0.0;
    read_json(json(a.delta), delta);
    require(d.integrated(), "numeric evaluation needs an integrated law");
    const double v = sym::evaluate(d, load_field(a.field), {delta});
    out["value"] = v;
    rep.say("value at delta = " + fmt(delta) + ": " + fmt(v));
  }
  rep.write_json(out);
  return kOk;
}

struct VerifyArgs {
  int weights_max_k = 10;
  int quadratic_max_n = 8;
  int kdv_max_n = 4;
  int rank_max_k = 5;
};

int run_verify(const Session& s, const VerifyArgs& a, json config) {
  require(a.weights_max_k >= 0 && a.quadratic_max_n >= 1 && a.kdv_max_n >= 1 && a.rank_max_k >= 0, "bounds must be positive");
  Report rep(s, "conslaw verify", std::move(config));
  json checks = json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok) {
    checks.push_back({{"check", name}, {"pass", ok}});
    all = all && ok;
    rep.say((ok ? "PASS " : "FAIL ") + name);
  };
  for (int k = 0; k <= a.weights_max_k; ++k) {
    sym::Rational acc = 0;
    for (int l = 0; l <= k; l += 2) acc += sym::a_coeff(k, l);
    record("deep weights sum to one, k=" + std::to_string(k), acc == 1);
  }
  for (int n = 1; n <= a.quadratic_max_n; ++n) {
    record("quadratic part of deep law " + std::to_string(n),
           sym::quadratic_part(sym::chi_deep(n, 2).integrate().degree_part(2)) == sym::quadratic_chi_closed_form(n));
    record("quadratic part of shallow law " + std::to_string(n),
           sym::quadratic_part(sym::h_tilde(n, 2).integrate()) == sym::quadratic_h_tilde_closed_form(n));
  }
  for (int n = 1; n <= a.kdv_max_n; ++n) {
    record("odd KdV law " + std::to_string(2 * n + 1) + " integrates to zero", sym::h_kdv(2 * n + 1).integrate().is_zero());
    record("even KdV law " + std::to_string(2 * n) + " is a signed Sobolev norm",
           sym::quadratic_part(sym::h_kdv(2 * n, 2).integrate()) == sym::quadratic_h_kdv_even_closed_form(n));
  }
  for (int k = 0; k <= a.rank_max_k; ++k) {
    record("deep energy " + std::to_string(k) + " is rank homogeneous", sym::rank_violations(sym::energy_deep(k)).empty());
    record("shallow energy " + std::to_string(k) + " is rank homogeneous", sym::rank_violations(sym::energy_shallow(k)).empty());
  }
  rep.write_json({{"checks", checks}, {"all_pass", all}});
  return all ? kOk : kCheckFailed;
}

struct DeepLimitArgs {
  int k = 2;
  std::vector<double> delta{8, 16, 32, 64};
  std::string field;
  bool check = false;
};

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

int run_limits_deep(const Session& s, const DeepLimitArgs& a, json config) {
  require(a.k >= 0 && a.k <= 8, "k must lie in 0..8");
  require(!a.delta.empty(), "need at least one delta");
  for (double d : a.delta) require(d > 0 && std::isfinite(d), "deep delta values must be finite and positive");
  const SpectralField u = load_field(a.field);
  const sym::CompiledDensity deep(sym::energy_deep(a.k)), bo(sym::energy_bo(a.k));
  const double limit = bo.evaluate(u, {});
  Csv csv({"delta", "energy", "limit_energy", "gap", "delta_times_gap"});
  std::vector<double> gaps;
  json rows = json::array();
  for (double d : a.delta) {
    const double e = deep.evaluate(u, {d});
    const double gap = std::abs(e - limit);
    gaps.push_back(gap);
    csv.row({d, e, limit, gap, d * gap});
    rows.push_back({{"delta", d}, {"energy", e}, {"gap", gap}});
  }
  Report rep(s, "limits deep", std::move(config));
  rep.say(csv.str());
  rep.write_text(".csv", csv.str());
  const bool ok = strictly_decreasing(gaps);
  rep.write_json({{"limit_energy", limit}, {"rows", rows}, {"gaps_decreasing", ok}});
  return a.check && !ok ? kCheckFailed : kOk;
}

struct ShallowLimitArgs {
  int kappa = 1;
  std::vector<double> delta{0.5, 0.1, 0.02, 0.004};
  std::string field;
  bool check = false;
};

int run_limits_shallow(const Session& s, const ShallowLimitArgs& a, json config) {
  require(a.kappa >= 1 && a.kappa <= 4, "kappa must lie in 1..4");
  require(!a.delta.empty(), "need at least one delta");
  for (double d : a.delta) require(d > 0 && std::isfinite(d), "shallow delta values must be finite and positive");
  const SpectralField v = load_field(a.field);
  const sym::CompiledDensity odd(sym::energy_shallow(2 * a.kappa - 1)), even(sym::energy_shallow(2 * a.kappa)),
      kdv(sym::energy_kdv(a.kappa));
  const double target = kdv.evaluate(v, {});
  Csv csv({"delta", "energy_odd", "energy_even", "kdv_energy", "gap_odd", "gap_even"});
  std::vector<double> go, ge;
  for (double d : a.delta) {
    const double eo = odd.evaluate(v, {d}), ee = even.evaluate(v, {d});
    go.push_back(std::abs(eo - target));
    ge.push_back(std::abs(ee - target));
    csv.row({d, eo, ee, target, go.back(), ge.back()});
  }
  Report rep(s, "limits shallow", std::move(config));
  rep.say(csv.str());
  rep.write_text(".csv", csv.str());
  const bool ok = strictly_decreasing(go) && strictly_decreasing(ge);
  rep.write_json({{"kdv_energy", target}, {"gap_odd", go}, {"gap_even", ge}, {"gaps_decreasing", ok}});
  return a.check && !ok ? kCheckFailed : kOk;
}

}  // namespace

void register_conslaw(CLI::App& root, Session& session) {
  auto* conslaw = root.add_subcommand("conslaw", "Canonicalized conservation laws")->require_subcommand(1);

  auto* show = conslaw->add_subcommand("show", "Print a canonicalized law");
  auto sa = std::make_shared<ShowArgs>();
  auto sp = std::make_shared<ParamSet>(show);
  sp->add("regime", sa->regime, "deep, bo, shallow or kdv");
  sp->add("k", sa->k, "index (the energy E_{k/2}; the kappa of a KdV energy)");
  sp->add("delta", sa->delta, "'sym' for the symbolic law, or a depth at which to evaluate it");
  sp->add("law", sa->law, "energy or micro");
  sp->add("field", sa->field, "field JSON used with a numeric delta");
  on_run(session, show, sa, sp, run_show);

  auto* verify = conslaw->add_subcommand("verify", "Run the symbolic identity suite");
  auto va = std::make_shared<VerifyArgs>();
  auto vp = std::make_shared<ParamSet>(verify);
  vp->add("weights-max-k", va->weights_max_k, "largest k for the weight sums");
  vp->add("quadratic-max-n", va->quadratic_max_n, "largest n for the quadratic closed forms");
  vp->add("kdv-max-n", va->kdv_max_n, "largest n for the KdV identities");
  vp->add("rank-max-k", va->rank_max_k, "largest k for the rank checks");
  on_run(session, verify, va, vp, run_verify);
}

void register_limits(CLI::App& root, Session& session) {
  auto* limits = root.add_subcommand("limits", "Deep- and shallow-water limit tables")->require_subcommand(1);

  auto* deep = limits->add_subcommand("deep", "Gap between the finite-depth and BO energies over delta");
  auto da = std::make_shared<DeepLimitArgs>();
  auto dp = std::make_shared<ParamSet>(deep);
  dp->add("k", da->k, "energy index");
  dp->add("delta", da->delta, "comma-separated depths");
  dp->add("field", da->field, "field JSON (default: modes 1 and 2)");
  dp->flag("check", da->check, "exit 1 unless the gap decreases");
  on_run(session, deep, da, dp, run_limits_deep);

  auto* shallow = limits->add_subcommand("shallow", "Collapse of two shallow energies onto one KdV energy");
  auto sa = std::make_shared<ShallowLimitArgs>();
  auto sp = std::make_shared<ParamSet>(shallow);
  sp->add("kappa", sa->kappa, "KdV index");
  sp->add("delta", sa->delta, "comma-separated depths");
  sp->add("field", sa->field, "field JSON (default: modes 1 and 2)");
  sp->flag("check", sa->check, "exit 1 unless both gaps decrease");
  on_run(session, shallow, sa, sp, run_limits_shallow);
}

}  // namespace ilwcli
