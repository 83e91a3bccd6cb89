#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ilw/density.hpp"
#include "ilw/dynamics.hpp"
#include "ilw/evaluate.hpp"
#include "ilw/spectral.hpp"

namespace ilw {

class MeasureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base Gaussian measure with per-mode variance law E|û(n)|² = 2/T(n).
//   deep     T = Σ_{ℓ even} a_{k,ℓ}|n|^ℓ 𝔎_δ(n)^{k−ℓ}       (δ = ∞ gives |n|^k)
//   bo       T = |n|^k
//   shallow  T̃ built from 𝔏_δ; δ = 0 is the KdV law and needs even k
//   kdv      T = n^{2κ} with κ = ⌈k/2⌉
struct GaussianSpec {
  sym::Regime regime = sym::Regime::Deep;
  int k = 2;
  double delta = 1.0;
};

void validate(const GaussianSpec& spec);
std::string describe(const GaussianSpec& spec);
nlohmann::json to_json(const GaussianSpec& spec);

double T_multiplier(const GaussianSpec& spec, long n);
// |n|^k − T(n) computed without cancellation (deep regime, finite δ).
double deep_gap(int k, double delta, long n);

// Energy whose quadratic part is Σ_{n≥1} T(n)|û(n)|², and the flow that
// conserves it.
sym::Density conserved_energy(const GaussianSpec& spec);
EvolutionSpec flow_spec(const GaussianSpec& spec, long cutoff);

// Philox4x32-10 counter-based generator.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  explicit Philox4x32(std::uint64_t key) : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}
  Block operator()(Block counter) const;

 private:
  std::array<std::uint32_t, 2> key_;
};

// ξ + iζ with ξ, ζ independent N(0,1); a pure function of (seed, sample, mode).
cplx complex_gaussian(std::uint64_t seed, std::uint64_t sample, long mode);

// û(n) = g_n/√T(n) for 1 ≤ n ≤ N.  Mode n of sample i does not depend on N.
SpectralField sample(const GaussianSpec& spec, long N, std::uint64_t seed, std::uint64_t sample_index = 0);

// E‖P_N X‖²_{Ḣ^s} = 4 Σ_{n=1}^N n^{2s}/T(n).
double expected_sobolev_square(const GaussianSpec& spec, double s, long N);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

// Pairwise-summed mean and standard error of independent draws.
McEstimate mean_estimate(std::span<const double> xs);
McEstimate sobolev_square_mc(const GaussianSpec& spec, double s, long N, long samples, std::uint64_t seed);

enum class CutoffShape { Smooth, Sharp };

// η with η = 1 on [0,1], η = 0 on [2,∞) and a C^∞ transition in between.
double cutoff_eta(double x, CutoffShape shape);

// η_K(‖P_N u‖_{L²})·exp(−c·R(P_N u)).  With variance-2 sampling the base
// measure has density exp(−½Σ T|û|²), so c = ½ makes the weighted measure a
// function of the conserved energy alone.
struct GibbsParams {
  long N = 32;
  double K = 1.0;
  CutoffShape shape = CutoffShape::Smooth;
  double coupling = 0.5;
};

class GibbsWeight {
 public:
  GibbsWeight(const GaussianSpec& spec, const GibbsParams& params);

  double interaction(const SpectralField& u) const;  // R(P_N u)
  double log_weight(const SpectralField& u) const;   // −∞ outside the cutoff support
  double operator()(const SpectralField& u) const;

 private:
  GaussianSpec spec_;
  GibbsParams params_;
  sym::CompiledDensity interaction_;
};

double gibbs_density(const GaussianSpec& spec, const SpectralField& u, const GibbsParams& params);

// S_M = Σ_{0<|n|≤M} (T_B(n)/T_A(n) − 1)² for M = 1..cutoff (entry M−1).
std::vector<double> kakutani_partial_sums(const GaussianSpec& a, const GaussianSpec& b, long cutoff);

struct SlopeClassifier {
  double threshold = 0.1;  // log–log slope above which the sums count as growing
  double span = 10.0;      // ratio of the last and first M of the fitted window
};

struct DichotomyReport {
  double slope = 0.0;
  bool growing = false;
};

DichotomyReport classify(std::span<const double> partial_sums, const SlopeClassifier& c);

double kl_phi(double t);  // t − 1 − log t

struct KlResult {
  double value = 0.0;
  long direct_terms = 0;
  double tail = 0.0;             // integral estimate of the remaining sum
  double remainder_bound = 0.0;  // size of the first neglected correction
};

// Σ_{n≥1} φ(n^k/T_{δ,k/2}(n)) for the deep measures.
KlResult kl_gaussian(int k, double delta);

// Two-pair part of Σ_{n₁+…+n₄=0, 0<|n_j|≤N, |n₃+n₄|>N} Π û(n_j)·(i n₄).
struct PairSum {
  cplx value;
  double magnitude = 0.0;  // Σ of |terms|
};
PairSum two_pair_sum(const SpectralField& u, long N);

struct AsymptoticParams {
  GaussianSpec spec;
  long N = 32;
  double p = 2.0;
  long samples = 1000;
  std::uint64_t seed = 1;
  long audited = 4;        // samples checked against finite differences
  double fd_step = 0.0;    // h (≤ 0: 0.016/N); the oracle also runs at h/2
  long fd_substeps = 4;    // integrator steps per h
};

struct AuditRow {
  long sample = 0;
  double analytic = 0.0;
  double fd_coarse = 0.0;
  double fd_fine = 0.0;
  double err_coarse = 0.0;
  double err_fine = 0.0;
};

struct AsymptoticResult {
  McEstimate statistic;  // (E|d/dt E(P_N Φ_N(t)u)|_{t=0}|^p)^{1/p}
  std::vector<AuditRow> audits;
  double max_pair_ratio = 0.0;  // max |two-pair sum| / magnitude on the audited samples
};

AsymptoticResult asymptotic_conservation(const AsymptoticParams& params);

// d/dt E(P_N Φ_N(t)u) at t = 0 through the p* density.
class ConservationDefect {
 public:
  ConservationDefect(const GaussianSpec& spec, long N);
  double operator()(const SpectralField& u) const;

 private:
  GaussianSpec spec_;
  long N_;
  sym::CompiledDensity defect_;
};

struct InvarianceParams {
  GaussianSpec spec;
  GibbsParams gibbs;
  long samples = 1000;
  std::uint64_t seed = 1;
  double t_final = 1.0;
  double dt = 5e-4;
};

struct ObservableDrift {
  std::string name;
  double before = 0.0;
  double after = 0.0;
  double drift = 0.0;
  double combined_stderr = 0.0;  // sqrt(se_before² + se_after²)
  double paired_stderr = 0.0;
  double liouville_drift = 0.0;  // E_ρ[f(Φu)(1 − exp(−c·ΔE))]
};

struct InvarianceResult {
  std::vector<ObservableDrift> battery;
  double effective_samples = 0.0;
  double max_z = 0.0;            // max |drift| / combined_stderr
  double liouville_norm = 0.0;   // RMS of liouville_drift scaled by the observable spread
  double energy_change_rms = 0.0;
};

InvarianceResult invariance_test(const InvarianceParams& params);

nlohmann::json to_json(const McEstimate& e);
nlohmann::json to_json(const KlResult& r);
nlohmann::json to_json(const AsymptoticResult& r);
nlohmann::json to_json(const InvarianceResult& r);

}  // namespace ilw
