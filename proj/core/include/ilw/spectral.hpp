#pragma once

#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ilw/multipliers.hpp"

namespace ilw {

using cplx = std::complex<double>;

// Mean-zero real function on the torus, stored through its positive Fourier
// modes 1..cutoff.  û(-n) = conj(û(n)) and û(0) = 0 are implied.
// Convention: f(x) = (2π)^{-1/2} Σ f̂(n) e^{inx}, so ‖f‖²_{L²} = Σ |f̂(n)|².
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(std::vector<cplx> positive_modes);

  static SpectralField synthesize(const std::map<long, cplx>& coeffs);
  static SpectralField zero(long cutoff);

  long cutoff() const { return static_cast<long>(modes_.size()); }
  std::span<const cplx> modes() const { return modes_; }
  // Coefficient at any integer mode (0 outside the stored range).
  cplx operator[](long n) const;

  SpectralField truncated(long n_max) const;  // Dirichlet projector P_N
  SpectralField padded(long new_cutoff) const;

  SpectralField operator+(const SpectralField& other) const;
  SpectralField operator-(const SpectralField& other) const;
  SpectralField operator*(double s) const;

  bool operator==(const SpectralField&) const = default;

 private:
  std::vector<cplx> modes_;
};

// Complex coefficients on modes -K..K including the zero mode.  Produced by
// products; needed for integrals and for general (non-Hermitian) symbols.
class FullSpectrum {
 public:
  FullSpectrum() = default;
  explicit FullSpectrum(long half_width);
  static FullSpectrum from_field(const SpectralField& f);

  long half_width() const { return half_width_; }
  cplx& at(long n) { return data_[static_cast<std::size_t>(n + half_width_)]; }
  cplx at(long n) const;
  std::span<const cplx> data() const { return data_; }

  // Strip the zero mode; the spectrum must be Hermitian (real function).
  SpectralField to_field(double hermitian_tol = 1e-9) const;

 private:
  long half_width_ = 0;
  std::vector<cplx> data_{cplx{}};
};

class SpectralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Alias-free product with the torus convolution convention.
FullSpectrum multiply_full(const FullSpectrum& f, const FullSpectrum& g);
FullSpectrum multiply_full(const SpectralField& f, const SpectralField& g);
SpectralField multiply(const SpectralField& f, const SpectralField& g);

// Brute-force convolution; test oracle and small-size fast path.
FullSpectrum convolve_direct(const FullSpectrum& f, const FullSpectrum& g);

SpectralField apply_multiplier(const SpectralField& f, SymbolKind kind, double delta = 1.0);
FullSpectrum apply_multiplier(const FullSpectrum& f, SymbolKind kind, double delta = 1.0);

// ∫_T f dx = √(2π)·f̂(0).
cplx integral_complex(const FullSpectrum& f);
double integral(const FullSpectrum& f);

// (Σ_{n≠0} w(n)^{2s} |û(n)|²)^{1/2}, w = |n| or ⟨n⟩ = (1+n²)^{1/2}.
double sobolev_norm(const SpectralField& f, double s, bool homogeneous = true);

// Physical samples at x_j = 2πj/M, and the inverse map.
std::vector<double> to_physical(const SpectralField& f, std::size_t grid);
SpectralField from_physical(std::span<const double> values, long cutoff);

nlohmann::json to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);

}  // namespace ilw
