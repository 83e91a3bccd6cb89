#include "ilw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "ilw/fft.hpp"

namespace ilw {

namespace {

const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

// Direct convolution wins below this many multiply-adds.
constexpr long kDirectThreshold = 2048;

}  // namespace

SpectralField::SpectralField(std::vector<cplx> positive_modes) : modes_(std::move(positive_modes)) {}

SpectralField SpectralField::synthesize(const std::map<long, cplx>& coeffs) {
  if (coeffs.empty()) return {};
  for (const auto& [n, c] : coeffs) {
    if (n <= 0) throw SpectralError("synthesize: only positive modes may be supplied (got " + std::to_string(n) + ")");
  }
  std::vector<cplx> modes(static_cast<std::size_t>(coeffs.rbegin()->first));
  for (const auto& [n, c] : coeffs) modes[static_cast<std::size_t>(n - 1)] = c;
  SpectralField f;
  f.modes_ = std::move(modes);
  return f;
}

SpectralField SpectralField::zero(long cutoff) {
  SpectralField f;
  f.modes_.assign(static_cast<std::size_t>(std::max(0L, cutoff)), cplx{});
  return f;
}

cplx SpectralField::operator[](long n) const {
  if (n == 0) return {};
  const long a = std::abs(n);
  if (a > cutoff()) return {};
  const cplx c = modes_[static_cast<std::size_t>(a - 1)];
  return n > 0 ? c : std::conj(c);
}

SpectralField SpectralField::truncated(long n_max) const {
  SpectralField f;
  const long n = std::clamp(n_max, 0L, cutoff());
  f.modes_.assign(modes_.begin(), modes_.begin() + n);
  return f;
}

SpectralField SpectralField::padded(long new_cutoff) const {
  SpectralField f = *this;
  if (new_cutoff > cutoff()) f.modes_.resize(static_cast<std::size_t>(new_cutoff));
  return f;
}

SpectralField SpectralField::operator+(const SpectralField& other) const {
  SpectralField f;
  f.modes_.resize(static_cast<std::size_t>(std::max(cutoff(), other.cutoff())));
  for (long n = 1; n <= f.cutoff(); ++n) f.modes_[static_cast<std::size_t>(n - 1)] = (*this)[n] + other[n];
  return f;
}

SpectralField SpectralField::operator-(const SpectralField& other) const { return *this + other * -1.0; }

SpectralField SpectralField::operator*(double s) const {
  SpectralField f = *this;
  for (auto& c : f.modes_) c *= s;
  return f;
}

FullSpectrum::FullSpectrum(long half_width)
    : half_width_(half_width), data_(static_cast<std::size_t>(2 * half_width + 1)) {}

FullSpectrum FullSpectrum::from_field(const SpectralField& f) {
  FullSpectrum s(f.cutoff());
  for (long n = -f.cutoff(); n <= f.cutoff(); ++n) s.at(n) = f[n];
  return s;
}

cplx FullSpectrum::at(long n) const {
  if (std::abs(n) > half_width_) return {};
  return data_[static_cast<std::size_t>(n + half_width_)];
}

SpectralField FullSpectrum::to_field(double hermitian_tol) const {
  std::vector<cplx> modes(static_cast<std::size_t>(half_width_));
  double scale = 0.0;
  for (const auto& c : data_) scale = std::max(scale, std::abs(c));
  for (long n = 1; n <= half_width_; ++n) {
    const cplx p = at(n);
    const cplx m = at(-n);
    if (std::abs(p - std::conj(m)) > hermitian_tol * std::max(1.0, scale)) {
      throw SpectralError("to_field: spectrum is not Hermitian (complex-valued function)");
    }
    modes[static_cast<std::size_t>(n - 1)] = 0.5 * (p + std::conj(m));
  }
  return SpectralField(std::move(modes));
}

FullSpectrum convolve_direct(const FullSpectrum& f, const FullSpectrum& g) {
  const long kf = f.half_width();
  const long kg = g.half_width();
  FullSpectrum out(kf + kg);
  for (long a = -kf; a <= kf; ++a) {
    const cplx fa = f.at(a);
    if (fa == cplx{}) continue;
    for (long b = -kg; b <= kg; ++b) out.at(a + b) += fa * g.at(b);
  }
  for (long n = -out.half_width(); n <= out.half_width(); ++n) out.at(n) /= kSqrt2Pi;
  return out;
}

FullSpectrum multiply_full(const FullSpectrum& f, const FullSpectrum& g) {
  const long kf = f.half_width();
  const long kg = g.half_width();
  if ((2 * kf + 1) * (2 * kg + 1) <= kDirectThreshold) return convolve_direct(f, g);
  const long k_out = kf + kg;
  const std::size_t m = fft::good_size(static_cast<std::size_t>(2 * k_out + 1));
  const long ml = static_cast<long>(m);
  std::vector<cplx> a(m), b(m);
  for (long n = -kf; n <= kf; ++n) a[static_cast<std::size_t>((n + ml) % ml)] = f.at(n);
  for (long n = -kg; n <= kg; ++n) b[static_cast<std::size_t>((n + ml) % ml)] = g.at(n);
  fft::backward(a);
  fft::backward(b);
  for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
  fft::forward(a);
  // physical values carry (2π)^{-1/2} each; forward transform gives M·(2π)^{-1}·Σ.
  const double scale = 1.0 / (static_cast<double>(m) * kSqrt2Pi);
  FullSpectrum out(k_out);
  for (long n = -k_out; n <= k_out; ++n) out.at(n) = a[static_cast<std::size_t>((n + ml) % ml)] * scale;
  return out;
}

FullSpectrum multiply_full(const SpectralField& f, const SpectralField& g) {
  return multiply_full(FullSpectrum::from_field(f), FullSpectrum::from_field(g));
}

SpectralField multiply(const SpectralField& f, const SpectralField& g) { return multiply_full(f, g).to_field(); }

namespace {

void validate_symbol(SymbolKind kind, double delta) {
  switch (kind.tag) {
    case SymbolTag::Gdelta:
      if (!(delta > 0.0)) throw SymbolError("G_delta needs delta > 0 (or infinity)");
      break;
    case SymbolTag::GdeltaTilde:
    case SymbolTag::Qdelta:
    case SymbolTag::QdeltaTilde:
    case SymbolTag::Tilbert:
      if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw SymbolError(to_string(kind.tag) + " needs finite delta > 0");
      }
      break;
    case SymbolTag::ProjLow:
    case SymbolTag::ProjHigh:
      if (kind.cutoff < 0) throw SymbolError("projection cutoff must be nonnegative");
      break;
    default: break;
  }
}

}  // namespace

SpectralField apply_multiplier(const SpectralField& f, SymbolKind kind, double delta) {
  validate_symbol(kind, delta);
  std::vector<cplx> modes(static_cast<std::size_t>(f.cutoff()));
  for (long n = 1; n <= f.cutoff(); ++n) modes[static_cast<std::size_t>(n - 1)] = symbol(kind, delta, n) * f[n];
  return SpectralField(std::move(modes));
}

FullSpectrum apply_multiplier(const FullSpectrum& f, SymbolKind kind, double delta) {
  validate_symbol(kind, delta);
  FullSpectrum out(f.half_width());
  for (long n = -f.half_width(); n <= f.half_width(); ++n) out.at(n) = symbol_or_zero(kind, delta, n) * f.at(n);
  return out;
}

cplx integral_complex(const FullSpectrum& f) { return kSqrt2Pi * f.at(0); }

double integral(const FullSpectrum& f) { return integral_complex(f).real(); }

double sobolev_norm(const SpectralField& f, double s, bool homogeneous) {
  double acc = 0.0;
  for (long n = 1; n <= f.cutoff(); ++n) {
    const double dn = static_cast<double>(n);
    const double w = homogeneous ? dn : std::sqrt(1.0 + dn * dn);
    acc += 2.0 * std::pow(w, 2.0 * s) * std::norm(f[n]);
  }
  return std::sqrt(acc);
}

std::vector<double> to_physical(const SpectralField& f, std::size_t grid) {
  if (static_cast<long>(grid) < 2 * f.cutoff() + 1) throw SpectralError("to_physical: grid too small for cutoff");
  std::vector<cplx> a(grid);
  const long m = static_cast<long>(grid);
  for (long n = -f.cutoff(); n <= f.cutoff(); ++n) a[static_cast<std::size_t>((n + m) % m)] = f[n];
  fft::backward(a);
  std::vector<double> out(grid);
  for (std::size_t j = 0; j < grid; ++j) out[j] = a[j].real() / kSqrt2Pi;
  return out;
}

SpectralField from_physical(std::span<const double> values, long cutoff) {
  const std::size_t m = values.size();
  if (static_cast<long>(m) < 2 * cutoff + 1) throw SpectralError("from_physical: grid too small for cutoff");
  std::vector<cplx> a(values.begin(), values.end());
  fft::forward(a);
  std::vector<cplx> modes(static_cast<std::size_t>(cutoff));
  const double scale = kSqrt2Pi / static_cast<double>(m);
  for (long n = 1; n <= cutoff; ++n) modes[static_cast<std::size_t>(n - 1)] = a[static_cast<std::size_t>(n)] * scale;
  return SpectralField(std::move(modes));
}

nlohmann::json to_json(const SpectralField& f) {
  nlohmann::json j;
  j["n"] = nlohmann::json::array();
  j["re"] = nlohmann::json::array();
  j["im"] = nlohmann::json::array();
  for (long n = 1; n <= f.cutoff(); ++n) {
    j["n"].push_back(n);
    j["re"].push_back(f[n].real());
    j["im"].push_back(f[n].imag());
  }
  return j;
}

SpectralField field_from_json(const nlohmann::json& j) {
  const auto& ns = j.at("n");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (ns.size() != re.size() || ns.size() != im.size()) throw SpectralError("field json: array lengths differ");
  std::map<long, cplx> coeffs;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    coeffs[ns[i].get<long>()] = cplx(re[i].get<double>(), im[i].get<double>());
  }
  return SpectralField::synthesize(coeffs);
}

}  // namespace ilw
