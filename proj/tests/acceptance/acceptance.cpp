// Acceptance run: one PASS/FAIL line per criterion.
//   ilw_acceptance [--only N] [--config kakutani.json]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilw/analysis.hpp"
#include "ilw/dynamics.hpp"
#include "ilw/evaluate.hpp"
#include "ilw/hierarchy.hpp"
#include "ilw/measures.hpp"
#include "ilw/present.hpp"

namespace {

using namespace ilw;
using sym::Density;
using sym::Regime;

namespace tol {
constexpr double kHalvingBand = 0.25;       // gap ratio per doubling within 2·(1 ± band)
constexpr double kCollapseFraction = 0.01;  // final gap relative to |E^KdV|
constexpr double kConservedDrift = 1e-6;
constexpr double kTruncatedDriftFloor = 1e-4;
constexpr double kMcSigmas = 3.0;
constexpr double kKlDeep = 1e-3;
constexpr double kDecayExponent = 0.2;
constexpr double kFdRefinement = 3.0;  // error ratio between h and h/2 (second order gives 4)
constexpr double kFdFloor = 1e-9;      // relative error below which refinement is not measurable
constexpr double kPairCancellation = 1e-12;
constexpr double kInvarianceSigmas = 3.0;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Config {
  long kakutani_cutoff = 100000;
  SlopeClassifier classifier;
};

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  const auto j = nlohmann::json::parse(in);
  Config c;
  c.kakutani_cutoff = j.value("cutoff", c.kakutani_cutoff);
  if (j.contains("classifier")) {
    c.classifier.threshold = j["classifier"].value("threshold", c.classifier.threshold);
    c.classifier.span = j["classifier"].value("span", c.classifier.span);
  }
  return c;
}

const SpectralField& probe_field() {
  static const SpectralField u = SpectralField::synthesize({{1, {0.3, 0.0}}, {2, {0.0, 0.1}}});
  return u;
}

Density g_dx(const Density& f) { return f.hilbert_dx() + f.q_op(); }

void symbolic_exactness(Outcome& o) {
  const Density u = Density::leaf(Regime::Deep);
  const Density ux = u.dx(), gux = g_dx(u), uu = u.multiply(u);
  const Density half = u.multiply(gux).integrate() * sym::ratio(1, 2) + uu.multiply(u).integrate() * sym::ratio(1, 3);
  Density one = ux.multiply(ux).integrate() * sym::ratio(1, 8);
  one += gux.multiply(gux).integrate() * sym::ratio(3, 8);
  one += uu.multiply(uu).integrate() * sym::ratio(1, 4);
  one += uu.multiply(gux).integrate() * sym::ratio(3, 4);
  one += uu.multiply(u).integrate().times_delta(-1) * sym::ratio(1, 4);
  const Density e1 = sym::energy_deep(1), e2 = sym::energy_deep(2);
  o.require(e1 == half, "E_1/2 differs from the hand density");
  o.require(e2 == one, "E_1 differs from the hand density");
  o.detail << "E_1/2: " << e1.monomial_count() << " monomials, E_1: " << e2.monomial_count() << " monomials";
  for (int k = 0; k <= 10; ++k) {
    sym::Rational s = 0;
    for (int l = 0; l <= k; l += 2) s += sym::a_coeff(k, l);
    o.require(s == 1, "weights of k = " + std::to_string(k) + " sum to " + s.get_str());
  }
  o.detail << "; weight sums equal 1 for k <= 10";
}

void quadratic_oracles(Outcome& o) {
  for (int n = 1; n <= 8; ++n) {
    o.require(sym::quadratic_part(sym::chi_deep(n, 2).integrate().degree_part(2)) == sym::quadratic_chi_closed_form(n),
              "deep law n = " + std::to_string(n));
    o.require(sym::quadratic_part(sym::h_tilde(n, 2).integrate()) == sym::quadratic_h_tilde_closed_form(n),
              "shallow law n = " + std::to_string(n));
  }
  for (int n = 1; n <= 4; ++n) {
    o.require(sym::h_kdv(2 * n + 1).integrate().is_zero(), "odd KdV law n = " + std::to_string(n));
    const auto q = sym::quadratic_part(sym::h_kdv(2 * n, 2).integrate());
    const bool signed_norm = q.size() == 1 && q[0].coeff == (n % 2 == 1 ? 1 : -1) && q[0].level == n - 1 && q[0].g_power == 0 &&
                             q[0].delta_power == 0;
    o.require(signed_norm && q == sym::quadratic_h_kdv_even_closed_form(n), "even KdV law n = " + std::to_string(n));
  }
  o.detail << "16 closed forms, 4 vanishing odd laws, 4 signed Sobolev norms";
}

void deep_water_limit(Outcome& o) {
  const auto& u = probe_field();
  for (int k : {2, 3}) {
    const sym::CompiledDensity deep(sym::energy_deep(k)), bo(sym::energy_bo(k));
    const double limit = bo.evaluate(u, {});
    double prev = 0.0;
    o.detail << "k=" << k << " gaps";
    for (double delta : {8.0, 16.0, 32.0, 64.0}) {
      const double gap = std::abs(deep.evaluate(u, {delta}) - limit);
      o.detail << " " << gap;
      if (prev > 0.0) {
        const double r = prev / gap;
        o.require(gap < prev, "gap not decreasing at delta = " + std::to_string(delta));
        o.require(std::abs(r / 2.0 - 1.0) <= tol::kHalvingBand, "ratio " + std::to_string(r) + " at delta = " + std::to_string(delta));
      }
      prev = gap;
    }
    o.detail << "; ";
  }
}

void shallow_collapse(Outcome& o) {
  const auto& v = probe_field();
  for (int kappa : {1, 2}) {
    const sym::CompiledDensity odd(sym::energy_shallow(2 * kappa - 1)), even(sym::energy_shallow(2 * kappa)), kdv(sym::energy_kdv(kappa));
    const double target = kdv.evaluate(v, {});
    double prev_odd = std::numeric_limits<double>::infinity(), prev_even = prev_odd;
    for (double delta : {0.5, 0.1, 0.02, 0.004}) {
      const double g_odd = std::abs(odd.evaluate(v, {delta}) - target), g_even = std::abs(even.evaluate(v, {delta}) - target);
      o.require(g_odd < prev_odd && g_even < prev_even, "gap not decreasing at delta = " + std::to_string(delta));
      prev_odd = g_odd;
      prev_even = g_even;
    }
    const double limit = tol::kCollapseFraction * std::abs(target);
    o.require(prev_odd < limit && prev_even < limit, "final gap too large for kappa = " + std::to_string(kappa));
    o.detail << "kappa=" << kappa << " final gaps " << prev_odd << ", " << prev_even << " (|E^KdV| " << std::abs(target) << "); ";
  }
}

void conservation(Outcome& o) {
  const auto u = SpectralField::synthesize({{1, {0.3, 0.0}}, {2, {0.0, 0.1}}, {3, {0.05, 0.05}}, {5, {-0.02, 0.0}}});
  IntegratorParams ip;
  ip.dt = 5e-4;
  ip.t_final = 1.0;
  ip.record_stride = 20;
  const double delta = 2.0;
  std::vector<std::pair<std::string, Density>> laws;
  for (int k = 0; k <= 3; ++k) laws.emplace_back("E" + std::to_string(k), sym::energy_deep(k));

  const Trajectory full = evolve({Dispersion::ILW, delta, std::nullopt, 128, true}, u, ip);
  o.detail << "full:";
  for (const auto& r : conservation_report(full, laws, {delta})) {
    o.require(r.max_rel_drift < tol::kConservedDrift, r.name + " drifts");
    o.detail << " " << r.name << "=" << r.max_rel_drift;
  }

  const long N = 4;
  const Trajectory trunc = evolve({Dispersion::ILW, delta, N, 128, true}, u, ip);
  const auto rows = conservation_report(trunc, {laws[0], laws[1], laws[2]}, {delta}, N);
  o.require(rows[0].max_rel_drift < tol::kConservedDrift, "truncated mass drifts");
  o.require(rows[1].max_rel_drift < tol::kConservedDrift, "truncated E_1/2 drifts");
  o.require(rows[2].max_rel_drift > tol::kTruncatedDriftFloor, "truncated E_1 does not drift");
  o.detail << "; truncated N=" << N << ": mass " << rows[0].max_rel_drift << ", E_1/2 " << rows[1].max_rel_drift << ", E_1 "
           << rows[2].max_rel_drift;
}

void sampler_moments(Outcome& o) {
  struct Point {
    GaussianSpec spec;
    double s;
    long N;
  };
  const std::vector<Point> grid{
      {{Regime::Deep, 2, 2.0}, 0.25, 64},  {{Regime::Deep, 2, 0.5}, 0.0, 32},          {{Regime::Deep, 3, 2.0}, 0.5, 64},
      {{Regime::Deep, 4, 8.0}, 1.25, 128}, {{Regime::Deep, 2, kInfiniteDepth}, 0.25, 128}, {{Regime::Shallow, 3, 0.5}, 0.75, 64},
  };
  std::uint64_t seed = 2024;
  for (const auto& p : grid) {
    const McEstimate mc = sobolev_square_mc(p.spec, p.s, p.N, 10000, seed++);
    const double exact = expected_sobolev_square(p.spec, p.s, p.N);
    const double z = (mc.estimate - exact) / mc.std_error;
    o.require(std::abs(z) < tol::kMcSigmas, describe(p.spec) + " z = " + std::to_string(z));
    o.detail << describe(p.spec) << " s=" << p.s << " N=" << p.N << " z=" << z << "; ";
  }
}

void kl_convergence(Outcome& o) {
  double prev = std::numeric_limits<double>::infinity(), last = 0.0;
  for (double delta : {2.0, 8.0, 32.0, 128.0}) {
    const KlResult r = kl_gaussian(2, delta);
    o.require(r.value < prev, "not decreasing at delta = " + std::to_string(delta));
    o.require(r.remainder_bound < 1e-3 * r.value, "tail remainder not resolved");
    o.detail << "delta=" << delta << ": " << r.value << "; ";
    prev = last = r.value;
  }
  o.require(last < tol::kKlDeep, "divergence at delta = 128 above threshold");
}

void kakutani_dichotomy(Outcome& o, const Config& cfg) {
  struct Case {
    const char* label;
    GaussianSpec a, b;
    bool expect_growth;
  };
  const std::vector<Case> cases{
      {"deep k=2 d=2 vs inf", {Regime::Deep, 2, 2.0}, {Regime::Deep, 2, kInfiniteDepth}, false},
      {"deep k=3 d=1 vs 4", {Regime::Deep, 3, 1.0}, {Regime::Deep, 3, 4.0}, false},
      {"shallow k=1 d=0.5 vs 1", {Regime::Shallow, 1, 0.5}, {Regime::Shallow, 1, 1.0}, true},
      {"shallow k=3 d=0.5 vs 1", {Regime::Shallow, 3, 0.5}, {Regime::Shallow, 3, 1.0}, true},
      {"shallow k=1 d=0.5 vs kdv", {Regime::Shallow, 1, 0.5}, {Regime::KdV, 1, 0.0}, true},
      {"shallow k=2 d=0.5 vs 1", {Regime::Shallow, 2, 0.5}, {Regime::Shallow, 2, 1.0}, false},
      {"shallow k=4 d=0.5 vs 1", {Regime::Shallow, 4, 0.5}, {Regime::Shallow, 4, 1.0}, false},
  };
  o.detail << "threshold " << cfg.classifier.threshold << ", span " << cfg.classifier.span << ", M " << cfg.kakutani_cutoff << ": ";
  for (const auto& c : cases) {
    const auto sums = kakutani_partial_sums(c.a, c.b, cfg.kakutani_cutoff);
    const DichotomyReport r = classify(sums, cfg.classifier);
    o.require(r.growing == c.expect_growth, c.label);
    o.detail << c.label << " slope " << r.slope << (r.growing ? " growing" : " saturating") << "; ";
  }
}

void asymptotic_conservation_check(Outcome& o) {
  const GaussianSpec spec{Regime::Deep, 3, 2.0};
  std::vector<double> logn, logs;
  double prev = std::numeric_limits<double>::infinity();
  for (long N : {16L, 32L, 64L, 128L}) {
    AsymptoticParams p;
    p.spec = spec;
    p.N = N;
    p.samples = 10000;
    p.seed = 7;
    p.audited = 4;
    const AsymptoticResult r = asymptotic_conservation(p);
    const double s = r.statistic.estimate;
    o.require(s < prev, "statistic not decreasing at N = " + std::to_string(N));
    prev = s;
    logn.push_back(std::log(static_cast<double>(N)));
    logs.push_back(std::log(s));
    for (const auto& a : r.audits) {
      const double floor = tol::kFdFloor * std::max(1.0, std::abs(a.analytic));
      o.require(a.err_fine <= a.err_coarse / tol::kFdRefinement || a.err_fine < floor,
                "finite-difference audit at N = " + std::to_string(N) + ", sample " + std::to_string(a.sample));
    }
    o.require(r.max_pair_ratio < tol::kPairCancellation, "two-pair cancellation at N = " + std::to_string(N));
    o.detail << "N=" << N << " stat " << s << " +- " << r.statistic.std_error << " pair " << r.max_pair_ratio << "; ";
  }
  const double mx = (logn[0] + logn[1] + logn[2] + logn[3]) / 4, my = (logs[0] + logs[1] + logs[2] + logs[3]) / 4;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    sxy += (logn[i] - mx) * (logs[i] - my);
    sxx += (logn[i] - mx) * (logn[i] - mx);
  }
  const double exponent = -sxy / sxx;
  o.require(exponent > tol::kDecayExponent, "decay exponent " + std::to_string(exponent));
  o.detail << "fitted exponent " << exponent;
}

void invariance(Outcome& o) {
  std::vector<InvarianceResult> results;
  for (long N : {32L, 64L}) {
    InvarianceParams p;
    p.spec = {Regime::Deep, 3, 2.0};
    p.gibbs.N = N;
    p.gibbs.K = 0.75;
    p.samples = 20000;
    p.seed = 11;
    p.t_final = 1.0;
    p.dt = 5e-4;
    results.push_back(invariance_test(p));
    const auto& r = results.back();
    o.detail << "N=" << N << " max z " << r.max_z << ", drift estimate " << r.liouville_norm << ", ESS " << r.effective_samples << "; ";
  }
  o.require(results[1].max_z < tol::kInvarianceSigmas, "battery drift at N = 64");
  o.require(results[1].liouville_norm < results[0].liouville_norm, "drift estimate does not decrease");
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  std::string config_path = ILW_ACCEPTANCE_CONFIG;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (a == "--config" && i + 1 < argc) config_path = argv[++i];
    else {
      std::cerr << "usage: ilw_acceptance [--only N] [--config file]\n";
      return 2;
    }
  }

  Config cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"symbolic exactness", symbolic_exactness},
      {"quadratic oracles", quadratic_oracles},
      {"deep-water limit", deep_water_limit},
      {"shallow-water collapse", shallow_collapse},
      {"conservation under flow", conservation},
      {"sampler moments", sampler_moments},
      {"KL convergence", kl_convergence},
      {"Kakutani dichotomy", [&](Outcome& o) { kakutani_dichotomy(o, cfg); }},
      {"asymptotic conservation", asymptotic_conservation_check},
      {"invariance smoke test", invariance},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (only != 0 && only != id) continue;
    Outcome o;
    o.detail.precision(4);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s  %s (%.1f s) :: %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(), secs, o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
