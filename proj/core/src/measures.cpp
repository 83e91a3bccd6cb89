#include "ilw/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "ilw/analysis.hpp"
#include "ilw/hierarchy.hpp"

namespace ilw {

namespace {

using sym::Regime;

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc;
  }
  const std::size_t h = xs.size() / 2;
  return pairwise_sum(xs.first(h)) + pairwise_sum(xs.subspan(h));
}

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

bool collapsed(const GaussianSpec& s) {
  return s.regime == Regime::KdV || (s.regime == Regime::Shallow && s.delta == 0.0);
}

bool deep_limit(const GaussianSpec& s) {
  return s.regime == Regime::BO || (s.regime == Regime::Deep && !std::isfinite(s.delta));
}

int kdv_index(const GaussianSpec& s) { return (s.k + 1) / 2; }

// 1 − (coth y − 1/y), accurate for all y > 0.
double one_minus_cmi(double y) {
  if (y > 1.0) return 1.0 / y - 2.0 / std::expm1(2.0 * y);
  return 1.0 - coth_minus_inverse(y);
}

// Precomputed weights of one variance law; T(x) for real x > 0.
class VarianceLaw {
 public:
  explicit VarianceLaw(const GaussianSpec& spec) : spec_(spec) {
    validate(spec);
    const int k = spec.k;
    coeffs_.assign(static_cast<std::size_t>(k + 1), 0.0);
    if (spec.regime == Regime::Deep && std::isfinite(spec.delta)) {
      for (int l = 0; l <= k; l += 2) coeffs_[static_cast<std::size_t>(l)] = sym::a_coeff(k, l).get_d();
    } else if (spec.regime == Regime::Shallow && spec.delta > 0.0) {
      for (int l = k % 2; l <= k; l += 2) coeffs_[static_cast<std::size_t>(l)] = sym::a_tilde_coeff(k, l).get_d();
    }
  }

  double operator()(double x) const {
    const double d = spec_.delta;
    if (collapsed(spec_)) return ipow(x, 2 * kdv_index(spec_));
    if (deep_limit(spec_)) return ipow(x, spec_.k);
    const int k = spec_.k;
    double t = 0.0;
    if (spec_.regime == Regime::Deep) {
      const double kd = x * coth_minus_inverse(d * x);
      for (int l = 0; l <= k; l += 2) t += coeffs_[static_cast<std::size_t>(l)] * ipow(x, l) * ipow(kd, k - l);
      return t;
    }
    const double ld = x * coth_minus_inverse(d * x) / d;
    if (k % 2 == 1) {
      for (int l = 1; l <= k; l += 2)
        t += coeffs_[static_cast<std::size_t>(l)] * ipow(d, l - 1) * ipow(x, k - l) * ipow(ld, l);
    } else {
      for (int l = 0; l <= k; l += 2) t += coeffs_[static_cast<std::size_t>(l)] * ipow(d, l) * ipow(x, k - l) * ipow(ld, l);
    }
    return t;
  }

  // x^k − T(x) for the deep law.
  double gap(double x) const {
    const int k = spec_.k;
    const double dx = x * one_minus_cmi(spec_.delta * x);  // x − 𝔎
    const double kd = x - dx;
    double g = 0.0;
    for (int l = 0; l <= k; l += 2) {
      const int m = k - l;
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += ipow(x, j) * ipow(kd, m - 1 - j);
      g += coeffs_[static_cast<std::size_t>(l)] * ipow(x, l) * dx * s;
    }
    return g;
  }

 private:
  GaussianSpec spec_;
  std::vector<double> coeffs_;
};

double st_uniform(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

struct Weighted {
  double mean = 0.0;
  double std_error = 0.0;
  double spread = 0.0;
};

Weighted weighted_stats(std::span<const double> w, std::span<const double> f) {
  std::vector<double> wf(w.size()), tmp(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) wf[i] = w[i] * f[i];
  const double sw = pairwise_sum(w);
  Weighted r;
  r.mean = pairwise_sum(wf) / sw;
  for (std::size_t i = 0; i < w.size(); ++i) tmp[i] = w[i] * w[i] * (f[i] - r.mean) * (f[i] - r.mean);
  r.std_error = std::sqrt(pairwise_sum(tmp)) / sw;
  for (std::size_t i = 0; i < w.size(); ++i) tmp[i] = w[i] * (f[i] - r.mean) * (f[i] - r.mean);
  r.spread = std::sqrt(pairwise_sum(tmp) / sw);
  return r;
}

sym::EvalParams eval_params(const GaussianSpec& spec, std::optional<long> cutoff = std::nullopt) {
  sym::EvalParams p;
  if (!collapsed(spec) && !deep_limit(spec)) p.delta = spec.delta;
  p.high_cutoff = cutoff;
  return p;
}

}  // namespace

void validate(const GaussianSpec& spec) {
  if (spec.k < 1) throw MeasureError("k must be a positive integer");
  switch (spec.regime) {
    case Regime::Deep:
      if (!(spec.delta > 0.0)) throw MeasureError("deep regime needs delta > 0 (inf for the BO limit)");
      break;
    case Regime::Shallow:
      if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta)) throw MeasureError("shallow regime needs finite delta >= 0");
      if (spec.delta == 0.0 && spec.k % 2 == 1)
        throw MeasureError("shallow delta = 0 is defined only for even k; request the kdv regime for the collapsed limit");
      break;
    case Regime::BO:
    case Regime::KdV: break;
  }
}

std::string describe(const GaussianSpec& spec) {
  std::ostringstream os;
  os << sym::to_string(spec.regime) << "(k=" << spec.k;
  if (spec.regime == Regime::Deep || spec.regime == Regime::Shallow) os << ", delta=" << spec.delta;
  os << ")";
  return os.str();
}

nlohmann::json to_json(const GaussianSpec& spec) {
  nlohmann::json j{{"regime", sym::to_string(spec.regime)}, {"k", spec.k}};
  if (std::isfinite(spec.delta)) j["delta"] = spec.delta;
  else j["delta"] = "inf";
  return j;
}

double T_multiplier(const GaussianSpec& spec, long n) {
  if (n == 0) throw MeasureError("T is defined for n != 0 only");
  return VarianceLaw(spec)(std::abs(static_cast<double>(n)));
}

double deep_gap(int k, double delta, long n) {
  const GaussianSpec spec{Regime::Deep, k, delta};
  if (!std::isfinite(delta)) return 0.0;
  return VarianceLaw(spec).gap(std::abs(static_cast<double>(n)));
}

sym::Density conserved_energy(const GaussianSpec& spec) {
  validate(spec);
  if (collapsed(spec)) return sym::energy_kdv(kdv_index(spec));
  if (deep_limit(spec)) return sym::energy_bo(spec.k);
  if (spec.regime == Regime::Deep) return sym::energy_deep(spec.k);
  return sym::energy_shallow(spec.k);
}

EvolutionSpec flow_spec(const GaussianSpec& spec, long cutoff) {
  validate(spec);
  EvolutionSpec e;
  e.truncation = cutoff;
  e.resolution = cutoff;
  e.delta = spec.delta;
  if (collapsed(spec)) e.family = Dispersion::KdV;
  else if (deep_limit(spec)) e.family = Dispersion::BO;
  else if (spec.regime == Regime::Deep) e.family = Dispersion::ILW;
  else e.family = Dispersion::ScaledILW;
  return e;
}

Philox4x32::Block Philox4x32::operator()(Block c) const {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  std::array<std::uint32_t, 2> k = key_;
  for (int r = 0; r < 10; ++r) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += w0;
    k[1] += w1;
  }
  return c;
}

cplx complex_gaussian(std::uint64_t seed, std::uint64_t sample, long mode) {
  const auto m = static_cast<std::uint64_t>(mode);
  const Philox4x32 gen(seed);
  const auto b = gen({static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m >> 32), static_cast<std::uint32_t>(sample),
                      static_cast<std::uint32_t>(sample >> 32)});
  const double u1 = st_uniform(b[0], b[1]);
  const double u2 = st_uniform(b[2], b[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(a), r * std::sin(a)};
}

SpectralField sample(const GaussianSpec& spec, long N, std::uint64_t seed, std::uint64_t sample_index) {
  if (N < 1) throw MeasureError("sample cutoff N must be >= 1");
  const VarianceLaw law(spec);
  std::vector<cplx> modes(static_cast<std::size_t>(N));
  for (long n = 1; n <= N; ++n)
    modes[static_cast<std::size_t>(n - 1)] = complex_gaussian(seed, sample_index, n) / std::sqrt(law(static_cast<double>(n)));
  return SpectralField(std::move(modes));
}

double expected_sobolev_square(const GaussianSpec& spec, double s, long N) {
  const VarianceLaw law(spec);
  std::vector<double> terms;
  for (long n = 1; n <= N; ++n) terms.push_back(4.0 * std::pow(static_cast<double>(n), 2.0 * s) / law(static_cast<double>(n)));
  return pairwise_sum(terms);
}

McEstimate mean_estimate(std::span<const double> xs) {
  McEstimate e;
  e.samples = static_cast<long>(xs.size());
  if (xs.empty()) return e;
  const double n = static_cast<double>(xs.size());
  e.estimate = pairwise_sum(xs) / n;
  if (xs.size() > 1) {
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = (xs[i] - e.estimate) * (xs[i] - e.estimate);
    e.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return e;
}

McEstimate sobolev_square_mc(const GaussianSpec& spec, double s, long N, long samples, std::uint64_t seed) {
  std::vector<double> xs(static_cast<std::size_t>(samples));
  for (long i = 0; i < samples; ++i) {
    const double v = sobolev_norm(sample(spec, N, seed, static_cast<std::uint64_t>(i)), s);
    xs[static_cast<std::size_t>(i)] = v * v;
  }
  return mean_estimate(xs);
}

double cutoff_eta(double x, CutoffShape shape) {
  if (x < 0.0) throw MeasureError("cutoff argument must be >= 0");
  if (shape == CutoffShape::Sharp) return x <= 1.0 ? 1.0 : 0.0;
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double a = std::exp(-1.0 / (2.0 - x));
  const double b = std::exp(-1.0 / (x - 1.0));
  return a / (a + b);
}

GibbsWeight::GibbsWeight(const GaussianSpec& spec, const GibbsParams& params)
    : spec_(spec), params_(params), interaction_([&] {
        validate(spec);
        if (spec.k < 2) throw MeasureError("generalized Gibbs weights need k >= 2 (k = 1 requires a renormalized cutoff)");
        if (params.N < 1) throw MeasureError("Gibbs cutoff N must be >= 1");
        if (!(params.K > 0.0)) throw MeasureError("L2 cutoff size K must be > 0");
        return sym::interaction_part(conserved_energy(spec));
      }()) {}

double GibbsWeight::interaction(const SpectralField& u) const {
  return interaction_.evaluate(u.truncated(params_.N), eval_params(spec_));
}

double GibbsWeight::log_weight(const SpectralField& u) const {
  const SpectralField low = u.truncated(params_.N);
  const double eta = cutoff_eta(sobolev_norm(low, 0.0) / params_.K, params_.shape);
  if (eta == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(eta) - params_.coupling * interaction_.evaluate(low, eval_params(spec_));
}

double GibbsWeight::operator()(const SpectralField& u) const { return std::exp(log_weight(u)); }

double gibbs_density(const GaussianSpec& spec, const SpectralField& u, const GibbsParams& params) {
  return GibbsWeight(spec, params)(u);
}

std::vector<double> kakutani_partial_sums(const GaussianSpec& a, const GaussianSpec& b, long cutoff) {
  const VarianceLaw la(a), lb(b);
  std::vector<double> out(static_cast<std::size_t>(std::max(0L, cutoff)));
  double acc = 0.0, comp = 0.0;  // Kahan: the sums run to 10⁵ terms
  for (long n = 1; n <= cutoff; ++n) {
    const double x = static_cast<double>(n);
    const double r = lb(x) / la(x) - 1.0;
    const double y = 2.0 * r * r - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
    out[static_cast<std::size_t>(n - 1)] = acc;
  }
  return out;
}

DichotomyReport classify(std::span<const double> s, const SlopeClassifier& c) {
  DichotomyReport r;
  if (s.size() < 2) return r;
  const auto hi = s.size();
  const auto lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(hi) / c.span)));
  if (s[hi - 1] <= 0.0 || s[lo - 1] <= 0.0 || lo == hi) return r;
  r.slope = std::log(s[hi - 1] / s[lo - 1]) / std::log(static_cast<double>(hi) / static_cast<double>(lo));
  r.growing = r.slope > c.threshold;
  return r;
}

double kl_phi(double t) {
  if (!(t > 0.0)) throw MeasureError("phi needs t > 0");
  const double e = t - 1.0;
  if (std::abs(e) < 1e-3) {
    // e − log(1+e) = Σ_{j≥2} (−1)^j e^j / j
    double term = e * e, s = 0.0;
    for (int j = 2; j <= 9; ++j) {
      s += ((j % 2 == 0) ? 1.0 : -1.0) * term / j;
      term *= e;
    }
    return s;
  }
  return e - std::log1p(e);
}

KlResult kl_gaussian(int k, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw MeasureError("KL divergence needs finite delta > 0");
  const GaussianSpec spec{Regime::Deep, k, delta};
  const VarianceLaw law(spec);
  auto term = [&](double x) {
    const double t = law(x);
    return kl_phi(1.0 + law.gap(x) / t);
  };
  KlResult r;
  const long n0 = std::max(200000L, static_cast<long>(std::ceil(40.0 / delta)));
  std::vector<double> terms(static_cast<std::size_t>(n0));
  for (long n = 1; n <= n0; ++n) terms[static_cast<std::size_t>(n - 1)] = term(static_cast<double>(n));
  r.direct_terms = n0;
  // Σ_{n>n0} f(n) ≈ ∫_{n0+½}^∞ f, error ≈ |f'(n0)|/24.
  const double a = static_cast<double>(n0) + 0.5;
  auto mapped = [&](double s) { return s <= 0.0 ? 0.0 : term(a / s) * a / (s * s); };
  r.tail = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(mapped, 0.0, 1.0, 8, 1e-13);
  r.remainder_bound = std::abs(term(static_cast<double>(n0)) - term(static_cast<double>(n0 + 1))) / 24.0;
  r.value = pairwise_sum(terms) + r.tail;
  return r;
}

PairSum two_pair_sum(const SpectralField& u, long N) {
  std::vector<double> values, mags;
  auto coef = [&](long n) { return n > 0 ? u[n] : std::conj(u[-n]); };
  for (long n1 = -N; n1 <= N; ++n1) {
    if (n1 == 0) continue;
    for (long n2 = -N; n2 <= N; ++n2) {
      if (n2 == 0 || std::abs(n1 + n2) <= N) continue;
      const double w = std::norm(coef(n1)) * std::norm(coef(n2));
      // pairing (n₃, n₄) = (−n₁, −n₂) and, when distinct, (−n₂, −n₁)
      values.push_back(-w * static_cast<double>(n2));
      mags.push_back(w * std::abs(static_cast<double>(n2)));
      if (n1 != n2) {
        values.push_back(-w * static_cast<double>(n1));
        mags.push_back(w * std::abs(static_cast<double>(n1)));
      }
    }
  }
  return {cplx(0.0, pairwise_sum(values)), pairwise_sum(mags)};
}

ConservationDefect::ConservationDefect(const GaussianSpec& spec, long N)
    : spec_(spec), N_(N), defect_(sym::p_star(conserved_energy(spec))) {
  if (N < 1) throw MeasureError("truncation N must be >= 1");
}

double ConservationDefect::operator()(const SpectralField& u) const {
  return defect_.evaluate(u.truncated(N_), eval_params(spec_, N_));
}

AsymptoticResult asymptotic_conservation(const AsymptoticParams& params) {
  const GaussianSpec& spec = params.spec;
  validate(spec);
  if (spec.k < 2) throw MeasureError("asymptotic conservation needs k >= 2");
  if (spec.regime != Regime::Deep && spec.regime != Regime::Shallow) throw MeasureError("asymptotic conservation needs the deep or shallow regime");
  if (!(params.p >= 1.0)) throw MeasureError("p must be >= 1");
  if (params.samples < 2) throw MeasureError("need at least 2 samples");
  const ConservationDefect defect(spec, params.N);
  const sym::CompiledDensity energy(conserved_energy(spec));
  const EvolutionSpec fs = flow_spec(spec, params.N);
  const auto ep = eval_params(spec);

  const double h = params.fd_step > 0.0 ? params.fd_step : 0.016 / static_cast<double>(params.N);
  AsymptoticResult res;
  std::vector<double> powers(static_cast<std::size_t>(params.samples));
  for (long i = 0; i < params.samples; ++i) {
    const SpectralField u = sample(spec, params.N, params.seed, static_cast<std::uint64_t>(i));
    const double d = defect(u);
    powers[static_cast<std::size_t>(i)] = std::pow(std::abs(d), params.p);
    if (i < params.audited) {
      auto fd = [&](double h) {
        const double sub = h / static_cast<double>(params.fd_substeps);
        const double ep_plus = energy.evaluate(flow(fs, u, h, sub), ep);
        const double ep_minus = energy.evaluate(flow(fs, u, -h, sub), ep);
        return (ep_plus - ep_minus) / (2.0 * h);
      };
      AuditRow row;
      row.sample = i;
      row.analytic = d;
      row.fd_coarse = fd(h);
      row.fd_fine = fd(h / 2.0);
      row.err_coarse = std::abs(row.fd_coarse - d);
      row.err_fine = std::abs(row.fd_fine - d);
      res.audits.push_back(row);
      const PairSum ps = two_pair_sum(u, params.N);
      if (ps.magnitude > 0.0) res.max_pair_ratio = std::max(res.max_pair_ratio, std::abs(ps.value) / ps.magnitude);
    }
  }
  const McEstimate m = mean_estimate(powers);
  res.statistic.samples = m.samples;
  res.statistic.estimate = std::pow(m.estimate, 1.0 / params.p);
  res.statistic.std_error = m.estimate > 0.0 ? res.statistic.estimate / (params.p * m.estimate) * m.std_error : 0.0;
  return res;
}

InvarianceResult invariance_test(const InvarianceParams& params) {
  const GaussianSpec& spec = params.spec;
  const long N = params.gibbs.N;
  const GibbsWeight weight(spec, params.gibbs);
  const sym::CompiledDensity energy(conserved_energy(spec));
  const EvolutionSpec fs = flow_spec(spec, N);
  const auto ep = eval_params(spec);
  if (params.samples < 2) throw MeasureError("need at least 2 samples");

  const std::vector<std::string> names{"abs2_mode1", "abs2_mode2", "abs2_mode3", "re_triad_112", "hhalf_norm_sq", "interaction"};
  auto battery = [&](const SpectralField& u) {
    const cplx t = u[1] * u[1] * std::conj(u[2]);
    const double h = sobolev_norm(u, 0.5);
    return std::vector<double>{std::norm(u[1]), std::norm(u[2]), std::norm(u[3]), t.real(), h * h, weight.interaction(u)};
  };
  const std::size_t nb = names.size();
  const auto ns = static_cast<std::size_t>(params.samples);
  std::vector<double> logw(ns), dE(ns);
  std::vector<std::vector<double>> before(nb, std::vector<double>(ns)), after(nb, std::vector<double>(ns));
  for (std::size_t i = 0; i < ns; ++i) {
    const SpectralField u = sample(spec, N, params.seed, i);
    logw[i] = weight.log_weight(u);
    if (!std::isfinite(logw[i])) continue;  // zero weight: the sample never contributes
    const SpectralField v = flow(fs, u, params.t_final, params.dt);
    dE[i] = energy.evaluate(v, ep) - energy.evaluate(u, ep);
    const auto fb = battery(u), fa = battery(v);
    for (std::size_t j = 0; j < nb; ++j) {
      before[j][i] = fb[j];
      after[j][i] = fa[j];
    }
  }
  const double lmax = *std::max_element(logw.begin(), logw.end());
  if (!std::isfinite(lmax)) throw MeasureError("all samples fall outside the L2 cutoff; increase K");
  std::vector<double> w(ns), w2(ns), sq(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    w[i] = std::exp(logw[i] - lmax);
    w2[i] = w[i] * w[i];
    sq[i] = w[i] * dE[i] * dE[i];
  }
  InvarianceResult res;
  const double sw = pairwise_sum(w);
  res.effective_samples = sw * sw / pairwise_sum(w2);
  res.energy_change_rms = std::sqrt(pairwise_sum(sq) / sw);
  double norm_acc = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    ObservableDrift o;
    o.name = names[j];
    const Weighted b = weighted_stats(w, before[j]), a = weighted_stats(w, after[j]);
    std::vector<double> diff(ns), lv(ns);
    for (std::size_t i = 0; i < ns; ++i) {
      diff[i] = after[j][i] - before[j][i];
      lv[i] = after[j][i] * -std::expm1(-params.gibbs.coupling * dE[i]);
    }
    const Weighted p = weighted_stats(w, diff), l = weighted_stats(w, lv);
    o.before = b.mean;
    o.after = a.mean;
    o.drift = a.mean - b.mean;
    o.combined_stderr = std::hypot(b.std_error, a.std_error);
    o.paired_stderr = p.std_error;
    o.liouville_drift = l.mean;
    if (o.combined_stderr > 0.0) res.max_z = std::max(res.max_z, std::abs(o.drift) / o.combined_stderr);
    if (b.spread > 0.0) norm_acc += (o.liouville_drift / b.spread) * (o.liouville_drift / b.spread);
    res.battery.push_back(o);
  }
  res.liouville_norm = std::sqrt(norm_acc / static_cast<double>(nb));
  return res;
}

nlohmann::json to_json(const McEstimate& e) {
  return {{"estimate", e.estimate}, {"stderr", e.std_error}, {"samples", e.samples}};
}

nlohmann::json to_json(const KlResult& r) {
  return {{"value", r.value}, {"direct_terms", r.direct_terms}, {"tail", r.tail}, {"remainder_bound", r.remainder_bound}};
}

nlohmann::json to_json(const AsymptoticResult& r) {
  nlohmann::json audits = nlohmann::json::array();
  for (const auto& a : r.audits)
    audits.push_back({{"sample", a.sample},
                      {"analytic", a.analytic},
                      {"fd_coarse", a.fd_coarse},
                      {"fd_fine", a.fd_fine},
                      {"err_coarse", a.err_coarse},
                      {"err_fine", a.err_fine}});
  return {{"statistic", to_json(r.statistic)}, {"audits", audits}, {"max_pair_ratio", r.max_pair_ratio}};
}

nlohmann::json to_json(const InvarianceResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& o : r.battery)
    rows.push_back({{"name", o.name},
                    {"before", o.before},
                    {"after", o.after},
                    {"drift", o.drift},
                    {"combined_stderr", o.combined_stderr},
                    {"paired_stderr", o.paired_stderr},
                    {"liouville_drift", o.liouville_drift}});
  return {{"battery", rows},
          {"effective_samples", r.effective_samples},
          {"max_z", r.max_z},
          {"liouville_norm", r.liouville_norm},
          {"energy_change_rms", r.energy_change_rms}};
}

}  // namespace ilw
