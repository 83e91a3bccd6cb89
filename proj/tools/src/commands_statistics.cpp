#include <cmath>

#include "commands.hpp"
#include "ilw/measures.hpp"

namespace ilwcli {

namespace {

using namespace ilw;

CutoffShape parse_shape(const std::string& s) {
  if (s == "smooth") return CutoffShape::Smooth;
  if (s == "sharp") return CutoffShape::Sharp;
  throw UsageError("cutoff shape must be smooth or sharp");
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

struct AsymptoticArgs {
  std::string regime = "deep";
  int k = 3;
  double delta = 2.0;
  std::vector<long> N{16, 32, 64, 128};
  double p = 2.0;
  long samples = 1000;
  std::uint64_t seed = 1;
  long audited = 4;
  double fd_step = 0.0;
  bool check = false;
  double min_exponent = 0.2;
};

int run_asymptotic(const Session& s, const AsymptoticArgs& a, json config) {
  const GaussianSpec spec = make_spec(a.regime, a.k, a.delta);
  require(!a.N.empty(), "need at least one N");
  for (long n : a.N) require(n >= 1 && n <= 4096, "N values must lie in 1..4096");
  require(a.p >= 1.0, "p must be >= 1");
  require(a.samples >= 2, "samples must be >= 2");
  require(a.audited >= 0 && a.audited <= a.samples, "audited must lie in 0..samples");
  Csv csv({"N", "estimate", "stderr", "max_pair_ratio"});
  json rows = json::array();
  std::vector<double> ns, stats;
  bool audits_ok = true, pairs_ok = true, decreasing = true;
  for (long n : a.N) {
    AsymptoticParams p;
    p.spec = spec;
    p.N = n;
    p.p = a.p;
    p.samples = a.samples;
    p.seed = a.seed;
    p.audited = a.audited;
    p.fd_step = a.fd_step;
    const AsymptoticResult r = asymptotic_conservation(p);
    if (!stats.empty() && !(r.statistic.estimate < stats.back())) decreasing = false;
    ns.push_back(static_cast<double>(n));
    stats.push_back(r.statistic.estimate);
    for (const auto& au : r.audits)
      if (!(au.err_fine <= au.err_coarse / 3.0 || au.err_fine < 1e-9 * std::max(1.0, std::abs(au.analytic)))) audits_ok = false;
    if (!(r.max_pair_ratio < 1e-12)) pairs_ok = false;
    csv.row({static_cast<double>(n), r.statistic.estimate, r.statistic.std_error, r.max_pair_ratio});
    json j = to_json(r);
    j["spec"] = to_json(spec);
    j["N"] = n;
    j["p"] = a.p;
    j["seed"] = a.seed;
    rows.push_back(j);
  }
  const double exponent = ns.size() >= 2 ? -loglog_slope(ns, stats) : std::nan("");
  Report rep(s, "asymptotic", std::move(config));
  rep.say(csv.str());
  rep.say("fitted decay exponent " + fmt(exponent));
  rep.write_text(".csv", csv.str());
  const bool ok = decreasing && audits_ok && pairs_ok && !(exponent <= a.min_exponent);
  rep.write_json({{"rows", rows},
                  {"decay_exponent", ns.size() >= 2 ? json(exponent) : json(nullptr)},
                  {"decreasing", decreasing},
                  {"audits_pass", audits_ok},
                  {"pair_cancellation_pass", pairs_ok}});
  return a.check && !ok ? kCheckFailed : kOk;
}

struct InvarianceArgs {
  std::string regime = "deep";
  int k = 3;
  double delta = 2.0;
  std::vector<long> N{32, 64};
  long samples = 20000;
  double K = 0.75;
  double coupling = 0.5;
  std::string cutoff = "smooth";
  double dt = 5e-4;
  double t_final = 1.0;
  std::uint64_t seed = 11;
  double sigmas = 3.0;
  bool check = false;
};

int run_invariance(const Session& s, const InvarianceArgs& a, json config) {
  const GaussianSpec spec = make_spec(a.regime, a.k, a.delta);
  require(a.k >= 2, "the weighted measure needs k >= 2");
  require(!a.N.empty(), "need at least one N");
  for (long n : a.N) require(n >= 3 && n <= 1024, "N values must lie in 3..1024");
  require(a.samples >= 10, "samples must be >= 10");
  require(a.K > 0.0, "K must be > 0");
  require(a.dt > 0.0 && a.t_final >= 0.0, "dt must be > 0 and t-final >= 0");
  const CutoffShape shape = parse_shape(a.cutoff);
  Report rep(s, "invariance", std::move(config));
  Csv csv({"observable", "N", "before", "after", "drift", "combined_stderr", "paired_stderr", "liouville_drift"});
  json rows = json::array();
  std::vector<double> trend;
  bool within = true;
  for (long n : a.N) {
    InvarianceParams p;
    p.spec = spec;
    p.gibbs = {n, a.K, shape, a.coupling};
    p.samples = a.samples;
    p.seed = a.seed;
    p.t_final = a.t_final;
    p.dt = a.dt;
    const InvarianceResult r = invariance_test(p);
    for (const auto& o : r.battery)
      csv.row(o.name, {static_cast<double>(n), o.before, o.after, o.drift, o.combined_stderr, o.paired_stderr, o.liouville_drift});
    if (!(r.max_z < a.sigmas)) within = false;
    trend.push_back(r.liouville_norm);
    json j = to_json(r);
    j["N"] = n;
    rows.push_back(j);
    rep.say("N = " + std::to_string(n) + ": max z " + fmt(r.max_z) + ", drift estimate " + fmt(r.liouville_norm) +
            ", effective samples " + fmt(r.effective_samples));
  }
  bool trend_ok = true;
  for (std::size_t i = 1; i < trend.size(); ++i) trend_ok = trend_ok && trend[i] < trend[i - 1];
  rep.write_text(".csv", csv.str());
  rep.write_json({{"spec", to_json(spec)}, {"rows", rows}, {"within_sigmas", within}, {"drift_estimate_decreasing", trend_ok}});
  return a.check && !(within && trend_ok) ? kCheckFailed : kOk;
}

}  // namespace

void register_statistics(CLI::App& root, Session& session) {
  auto* asy = root.add_subcommand("asymptotic", "Conservation defect of the truncated flow over N");
  auto aa = std::make_shared<AsymptoticArgs>();
  auto ap = std::make_shared<ParamSet>(asy);
  ap->add("regime", aa->regime, "deep, bo, shallow or kdv");
  ap->add("k", aa->k, "order of the energy and measure");
  ap->add("delta", aa->delta, "depth");
  ap->add("N", aa->N, "comma-separated truncations");
  ap->add("p", aa->p, "moment order of the statistic");
  ap->add("samples", aa->samples, "draws per N");
  ap->add("seed", aa->seed, "generator key");
  ap->add("audited", aa->audited, "samples audited against finite differences");
  ap->add("fd-step", aa->fd_step, "finite-difference step (<= 0: 0.016/N)");
  ap->flag("check", aa->check, "exit 1 unless the statistic decays and all audits pass");
  ap->add("min-exponent", aa->min_exponent, "smallest accepted fitted decay exponent");
  on_run(session, asy, aa, ap, run_asymptotic);

  auto* inv = root.add_subcommand("invariance", "Importance-weighted observable battery before and after the flow");
  auto ia = std::make_shared<InvarianceArgs>();
  auto ip = std::make_shared<ParamSet>(inv);
  ip->add("regime", ia->regime, "deep, bo, shallow or kdv");
  ip->add("k", ia->k, "order of the energy and measure");
  ip->add("delta", ia->delta, "depth");
  ip->add("N", ia->N, "comma-separated truncations");
  ip->add("samples", ia->samples, "draws per N");
  ip->add("K", ia->K, "L2 cutoff radius");
  ip->add("coupling", ia->coupling, "factor in front of the interaction in the weight");
  ip->add("cutoff", ia->cutoff, "smooth or sharp");
  ip->add("dt", ia->dt, "time step");
  ip->add("t-final", ia->t_final, "final time");
  ip->add("seed", ia->seed, "generator key");
  ip->add("sigmas", ia->sigmas, "allowed drift in combined standard errors");
  ip->flag("check", ia->check, "exit 1 unless every drift is within sigmas and the drift estimate decreases in N");
  on_run(session, inv, ia, ip, run_invariance);
}

}  // namespace ilwcli
