#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace ilw {

inline constexpr double kInfiniteDepth = std::numeric_limits<double>::infinity();

enum class SymbolTag {
  Hilbert,
  Gdelta,
  GdeltaTilde,
  Qdelta,
  QdeltaTilde,
  Tilbert,
  Dx,
  DxInv,
  ProjLow,
  ProjHigh,
  ProjNonzero,
};

struct SymbolKind {
  SymbolTag tag;
  long cutoff = 0;  // only read by ProjLow / ProjHigh

  static SymbolKind hilbert() { return {SymbolTag::Hilbert}; }
  static SymbolKind g_delta() { return {SymbolTag::Gdelta}; }
  static SymbolKind g_delta_tilde() { return {SymbolTag::GdeltaTilde}; }
  static SymbolKind q_delta() { return {SymbolTag::Qdelta}; }
  static SymbolKind q_delta_tilde() { return {SymbolTag::QdeltaTilde}; }
  static SymbolKind tilbert() { return {SymbolTag::Tilbert}; }
  static SymbolKind dx() { return {SymbolTag::Dx}; }
  static SymbolKind dx_inv() { return {SymbolTag::DxInv}; }
  static SymbolKind proj_low(long n) { return {SymbolTag::ProjLow, n}; }
  static SymbolKind proj_high(long n) { return {SymbolTag::ProjHigh, n}; }
  static SymbolKind proj_nonzero() { return {SymbolTag::ProjNonzero}; }
};

std::string to_string(SymbolTag tag);

class SymbolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerically stable hyperbolic pieces.  x is the product δn.
double coth_stable(double x);
// coth(x) - 1/x, odd, with a Taylor branch near 0.
double coth_minus_inverse(double x);

// Fourier multiplier m(n) for n != 0.  Throws SymbolError on n == 0, on
// delta <= 0 for depth-dependent families and on delta == inf except for
// Gdelta (whose limit is the Hilbert transform).
std::complex<double> symbol(SymbolKind kind, double delta, long n);

// Same as symbol() but returns 0 at n == 0 instead of throwing.  Used by
// the spectral kernels, which see the zero mode of products.
std::complex<double> symbol_or_zero(SymbolKind kind, double delta, long n);

enum class Dispersion { ILW, BO, ScaledILW, KdV };

// 𝔎_δ(n) = n coth(δn) - 1/δ (and |n| at δ = ∞).
double k_delta(double delta, long n);
// 𝔏_δ(n) = 𝔎_δ(n)/δ (and n²/3 at δ = 0).
double l_delta(double delta, long n);
// 𝔥(δ, n) = 1 - 3 𝔏_δ(n)/n².
double h_frak(double delta, long n);
// Real, even symbol of Q_δ = G_δ∂ₓ - H∂ₓ, i.e. 𝔎_δ(n) - |n|.
double q_delta_real(double delta, long n);
// g̃(n) with Ĝ̃_δ(n) = -i g̃(n).
double g_tilde_real(double delta, long n);
// q̃(n) with Q̂̃_δ(n) = -i q̃(n), i.e. g̃(n) - n/3.
double q_tilde_real(double delta, long n);

// Positive dispersion relation of a given equation family.
double dispersion(Dispersion family, double delta, long n);

enum class SeriesKind { Gdelta, Ldelta, Hfrak };

// Partial sums of the partial-fraction representations; independent of the
// coth code paths.
std::complex<double> series_oracle(SeriesKind kind, double delta, long n, long terms);

}  // namespace ilw
