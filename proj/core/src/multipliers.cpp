#include "ilw/multipliers.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace ilw {

namespace {

// Taylor coefficients of coth(x) - 1/x = Σ c_k x^(2k-1), c_k = 2^(2k) B_(2k) / (2k)!.
constexpr std::array<double, 10> kCothTaylor = {
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638512875.0,
    4.0 / 18243225.0,
    -3617.0 / 162820783125.0,
    87734.0 / 38979295480125.0,
    -349222.0 / 1531329465290625.0,
};

constexpr double kSeriesBranch = 0.25;

// Σ_{k >= first} c_k x^(2k-2), i.e. (coth x - 1/x)/x with the leading
// (first) terms removed.
double taylor_tail_over_x(double x, std::size_t first) {
  const double x2 = x * x;
  double acc = 0.0;
  for (std::size_t k = kCothTaylor.size(); k-- > first;) {
    acc = acc * x2 + kCothTaylor[k];
  }
  double scale = 1.0;
  for (std::size_t k = 0; k < first; ++k) scale *= x2;
  return acc * scale;
}

bool finite_positive(double delta) { return delta > 0.0 && std::isfinite(delta); }

void require_depth(double delta, bool allow_infinite) {
  if (std::isnan(delta) || delta <= 0.0) throw SymbolError("depth parameter must be positive");
  if (!allow_infinite && !std::isfinite(delta)) {
    throw SymbolError("infinite depth is only defined for the G_delta/Hilbert limit");
  }
}

double sgn(long n) { return n > 0 ? 1.0 : (n < 0 ? -1.0 : 0.0); }

}  // namespace

std::string to_string(SymbolTag tag) {
  switch (tag) {
    case SymbolTag::Hilbert: return "Hilbert";
    case SymbolTag::Gdelta: return "Gdelta";
    case SymbolTag::GdeltaTilde: return "GdeltaTilde";
    case SymbolTag::Qdelta: return "Qdelta";
    case SymbolTag::QdeltaTilde: return "QdeltaTilde";
    case SymbolTag::Tilbert: return "Tilbert";
    case SymbolTag::Dx: return "Dx";
    case SymbolTag::DxInv: return "DxInv";
    case SymbolTag::ProjLow: return "ProjLow";
    case SymbolTag::ProjHigh: return "ProjHigh";
    case SymbolTag::ProjNonzero: return "ProjNonzero";
  }
  return "?";
}

double coth_stable(double x) {
  if (x == 0.0) return std::copysign(std::numeric_limits<double>::infinity(), x);
  const double ax = std::abs(x);
  double v;
  if (ax < 1e-4) {
    v = 1.0 / ax + ax / 3.0 - ax * ax * ax / 45.0;
  } else {
    v = 1.0 + 2.0 / std::expm1(2.0 * ax);
  }
  return std::copysign(v, x);
}

double coth_minus_inverse(double x) {
  const double ax = std::abs(x);
  double v;
  if (ax < kSeriesBranch) {
    v = ax * taylor_tail_over_x(ax, 0);
  } else {
    v = 1.0 + 2.0 / std::expm1(2.0 * ax) - 1.0 / ax;
  }
  return std::copysign(v, x);
}

double k_delta(double delta, long n) {
  require_depth(delta, true);
  const double an = std::abs(static_cast<double>(n));
  if (!std::isfinite(delta)) return an;
  return an * coth_minus_inverse(delta * an);
}

double l_delta(double delta, long n) {
  const double dn = static_cast<double>(n);
  if (delta == 0.0) return dn * dn / 3.0;
  require_depth(delta, false);
  const double an = std::abs(dn);
  return an * coth_minus_inverse(delta * an) / delta;
}

double h_frak(double delta, long n) {
  require_depth(delta, false);
  if (n == 0) throw SymbolError("mode 0 has no multiplier");
  const double x = delta * std::abs(static_cast<double>(n));
  if (x < kSeriesBranch) return -3.0 * taylor_tail_over_x(x, 1);
  return 1.0 - 3.0 * coth_minus_inverse(x) / x;
}

double q_delta_real(double delta, long n) {
  require_depth(delta, true);
  if (!std::isfinite(delta)) return 0.0;
  const double an = std::abs(static_cast<double>(n));
  if (an == 0.0) return 0.0;
  const double x = delta * an;
  if (x < kSeriesBranch) return an * (coth_minus_inverse(x) - 1.0);
  return 2.0 * an / std::expm1(2.0 * x) - 1.0 / delta;
}

double g_tilde_real(double delta, long n) {
  require_depth(delta, false);
  return coth_minus_inverse(delta * static_cast<double>(n)) / delta;
}

double q_tilde_real(double delta, long n) {
  require_depth(delta, false);
  const double dn = static_cast<double>(n);
  const double x = delta * std::abs(dn);
  double v;
  if (x < kSeriesBranch) {
    v = x * taylor_tail_over_x(x, 1) / delta;
  } else {
    v = coth_minus_inverse(x) / delta - std::abs(dn) / 3.0;
  }
  return n < 0 ? -v : v;
}

std::complex<double> symbol_or_zero(SymbolKind kind, double delta, long n) {
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  const double dn = static_cast<double>(n);
  switch (kind.tag) {
    case SymbolTag::Hilbert: return -I * sgn(n);
    case SymbolTag::Gdelta:
      require_depth(delta, true);
      if (!std::isfinite(delta)) return -I * sgn(n);
      return -I * coth_minus_inverse(delta * dn);
    case SymbolTag::GdeltaTilde: require_depth(delta, false); return -I * g_tilde_real(delta, n);
    case SymbolTag::Qdelta: require_depth(delta, false); return C(q_delta_real(delta, n), 0.0);
    case SymbolTag::QdeltaTilde: require_depth(delta, false); return -I * q_tilde_real(delta, n);
    case SymbolTag::Tilbert:
      require_depth(delta, false);
      if (n == 0) return 0.0;
      return -I * coth_stable(delta * dn);
    case SymbolTag::Dx: return I * dn;
    case SymbolTag::DxInv:
      if (n == 0) return 0.0;
      return -I / dn;
    case SymbolTag::ProjLow: return (n != 0 && std::abs(n) <= kind.cutoff) ? 1.0 : 0.0;
    case SymbolTag::ProjHigh: return std::abs(n) > kind.cutoff ? 1.0 : 0.0;
    case SymbolTag::ProjNonzero: return n != 0 ? 1.0 : 0.0;
  }
  return 0.0;
}

std::complex<double> symbol(SymbolKind kind, double delta, long n) {
  if (n == 0) throw SymbolError("symbol requested at mode 0");
  return symbol_or_zero(kind, delta, n);
}

double dispersion(Dispersion family, double delta, long n) {
  if (n == 0) throw SymbolError("dispersion requested at mode 0");
  const double dn = static_cast<double>(n);
  switch (family) {
    case Dispersion::ILW: return k_delta(delta, n);
    case Dispersion::BO: return std::abs(dn);
    case Dispersion::ScaledILW: return l_delta(delta, n);
    case Dispersion::KdV: return dn * dn / 3.0;
  }
  return 0.0;
}

std::complex<double> series_oracle(SeriesKind kind, double delta, long n, long terms) {
  if (terms < 1) throw SymbolError("series needs at least one term");
  if (!finite_positive(delta)) throw SymbolError("series oracle needs finite positive depth");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double dn = delta * static_cast<double>(n);
  double acc = 0.0;
  // Smallest terms first.
  for (long k = terms; k >= 1; --k) {
    const double kk = static_cast<double>(k) * static_cast<double>(k) * pi2;
    switch (kind) {
      case SeriesKind::Gdelta: acc += dn / (kk + dn * dn); break;
      case SeriesKind::Ldelta: acc += 1.0 / (kk + dn * dn); break;
      case SeriesKind::Hfrak: acc += 1.0 / (kk * (kk + dn * dn)); break;
    }
  }
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  switch (kind) {
    case SeriesKind::Gdelta: return {0.0, -2.0 * acc};
    case SeriesKind::Ldelta: return {2.0 * nn * acc, 0.0};
    case SeriesKind::Hfrak: return {6.0 * dn * dn * acc, 0.0};
  }
  return 0.0;
}

}  // namespace ilw
