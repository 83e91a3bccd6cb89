#include "ilw/dynamics.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ilw/fft.hpp"

namespace ilw {

namespace {

using State = std::vector<cplx>;  // modes 1..M at index n-1

class Nonlinearity {
 public:
  explicit Nonlinearity(const EvolutionSpec& spec)
      : spec_(spec), band_(spec.truncation ? std::min(*spec.truncation, spec.resolution) : spec.resolution),
        grid_(fft::good_size(static_cast<std::size_t>(3 * std::max(band_, 1L) + 1))), work_(grid_) {}

  // out[n-1] = (∂ₓ u²)^(n) for n ≤ band, 0 above.
  void operator()(const State& u, State& out) {
    std::fill(out.begin(), out.end(), cplx{});
    if (!spec_.nonlinear || band_ == 0) return;
    std::fill(work_.begin(), work_.end(), cplx{});
    const std::size_t m = grid_;
    for (long n = 1; n <= band_; ++n) {
      const cplx c = u[static_cast<std::size_t>(n - 1)];
      work_[static_cast<std::size_t>(n)] = c;
      work_[m - static_cast<std::size_t>(n)] = std::conj(c);
    }
    fft::backward(work_);
    const double to_phys = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (auto& x : work_) {
      const double v = x.real() * to_phys;
      x = cplx(v * v, 0.0);
    }
    fft::forward(work_);
    const double to_coef = std::sqrt(2.0 * std::numbers::pi) / static_cast<double>(m);
    for (long n = 1; n <= band_; ++n) out[static_cast<std::size_t>(n - 1)] = cplx(0.0, static_cast<double>(n)) * work_[static_cast<std::size_t>(n)] * to_coef;
  }

 private:
  EvolutionSpec spec_;
  long band_;
  std::size_t grid_;
  std::vector<cplx> work_;
};

State to_state(const SpectralField& u, long m) {
  State s(static_cast<std::size_t>(m));
  for (long n = 1; n <= m; ++n) s[static_cast<std::size_t>(n - 1)] = u[n];
  return s;
}

double l2(const State& s) {
  double acc = 0.0;
  for (const auto& c : s) acc += std::norm(c);
  return std::sqrt(acc);
}

void validate(const EvolutionSpec& spec) {
  if (spec.resolution < 1) throw std::invalid_argument("evolution resolution must be >= 1");
  if (spec.truncation && *spec.truncation < 1) throw std::invalid_argument("truncation N must be >= 1");
  if (spec.family == Dispersion::ILW && !(spec.delta > 0.0)) throw std::invalid_argument("ILW requires delta > 0");
  if (spec.family == Dispersion::ScaledILW && !(spec.delta > 0.0 && std::isfinite(spec.delta)))
    throw std::invalid_argument("scaled ILW requires finite delta > 0");
}

class Stepper {
 public:
  Stepper(const EvolutionSpec& spec, double dt) : nl_(spec), dt_(dt) {
    const auto m = static_cast<std::size_t>(spec.resolution);
    half_.resize(m);
    full_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      const cplx lam = linear_symbol(spec, static_cast<long>(j + 1));
      half_[j] = std::exp(lam * (dt / 2));
      full_[j] = half_[j] * half_[j];
    }
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &tmp_}) v->resize(m);
  }

  void step(State& u) {
    const std::size_t m = u.size();
    const double h = dt_;
    nl_(u, k1_);
    for (std::size_t j = 0; j < m; ++j) tmp_[j] = half_[j] * (u[j] + 0.5 * h * k1_[j]);
    nl_(tmp_, k2_);
    for (std::size_t j = 0; j < m; ++j) tmp_[j] = half_[j] * u[j] + 0.5 * h * k2_[j];
    nl_(tmp_, k3_);
    for (std::size_t j = 0; j < m; ++j) tmp_[j] = full_[j] * u[j] + h * half_[j] * k3_[j];
    nl_(tmp_, k4_);
    for (std::size_t j = 0; j < m; ++j)
      u[j] = full_[j] * u[j] + (h / 6.0) * (full_[j] * k1_[j] + 2.0 * half_[j] * (k2_[j] + k3_[j]) + k4_[j]);
  }

 private:
  Nonlinearity nl_;
  double dt_;
  std::vector<cplx> half_, full_;
  State k1_, k2_, k3_, k4_, tmp_;
};

std::string fmt17(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

std::string to_string(Dispersion family) {
  switch (family) {
    case Dispersion::ILW: return "ilw";
    case Dispersion::BO: return "bo";
    case Dispersion::ScaledILW: return "silw";
    case Dispersion::KdV: return "kdv";
  }
  return "?";
}

Dispersion family_from_string(const std::string& s) {
  if (s == "ilw") return Dispersion::ILW;
  if (s == "bo") return Dispersion::BO;
  if (s == "silw" || s == "scaled-ilw") return Dispersion::ScaledILW;
  if (s == "kdv") return Dispersion::KdV;
  throw std::invalid_argument("unknown equation family '" + s + "' (expected ilw, silw, bo or kdv)");
}

std::complex<double> linear_symbol(const EvolutionSpec& spec, long n) {
  if (n == 0) throw SymbolError("linear_symbol: n must be nonzero");
  const double nn = static_cast<double>(n);
  const double w = dispersion(spec.family, spec.delta, n);
  return {0.0, nn * w};
}

SpectralField nonlinear_term(const EvolutionSpec& spec, const SpectralField& u) {
  validate(spec);
  Nonlinearity nl(spec);
  State s = to_state(u, spec.resolution), out(s.size());
  nl(s, out);
  return SpectralField(std::move(out));
}

double default_dt(const EvolutionSpec& spec) {
  double mx = 0.0;
  for (long n = 1; n <= spec.resolution; ++n) mx = std::max(mx, std::abs(linear_symbol(spec, n)));
  return mx > 0.0 ? 0.5 / mx : 1e-3;
}

Trajectory evolve(const EvolutionSpec& spec, const SpectralField& u0, const IntegratorParams& params) {
  validate(spec);
  if (params.t_final < 0.0) throw std::invalid_argument("t_final must be >= 0");
  if (params.record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  Trajectory tr;
  tr.spec = spec;
  tr.params = params;
  const double dt0 = params.dt > 0.0 ? params.dt : default_dt(spec);
  const long steps = std::max(1L, static_cast<long>(std::ceil(params.t_final / dt0 - 1e-9)));
  tr.dt = params.t_final > 0.0 ? params.t_final / static_cast<double>(steps) : 0.0;
  State u = to_state(u0, spec.resolution);
  tr.times.push_back(0.0);
  tr.states.emplace_back(u);
  if (params.t_final == 0.0) return tr;
  const double limit = params.blowup_factor * (l2(u) + 1.0);
  Stepper st(spec, tr.dt);
  for (long s = 1; s <= steps; ++s) {
    st.step(u);
    const double norm = l2(u);
    if (!std::isfinite(norm) || norm > limit) {
      std::ostringstream os;
      os << "evolution blew up at t = " << static_cast<double>(s) * tr.dt << " (L2 norm " << norm << ", dt " << tr.dt << ")";
      throw EvolutionError(os.str());
    }
    if (s % params.record_stride == 0 || s == steps) {
      tr.times.push_back(static_cast<double>(s) * tr.dt);
      tr.states.emplace_back(u);
    }
  }
  return tr;
}

SpectralField flow(const EvolutionSpec& spec, const SpectralField& u0, double t, double dt) {
  IntegratorParams p;
  p.dt = dt;
  p.t_final = std::abs(t);
  p.record_stride = 1 << 30;
  if (t >= 0.0) return evolve(spec, u0, p).states.back();
  // negative times: the same scheme with a negative step
  validate(spec);
  const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(t) / dt - 1e-9)));
  Stepper st(spec, t / static_cast<double>(steps));
  State u = to_state(u0, spec.resolution);
  for (long s = 0; s < steps; ++s) st.step(u);
  return SpectralField(std::move(u));
}

std::vector<DriftRow> conservation_report(const Trajectory& traj, const std::vector<std::pair<std::string, sym::Density>>& energies,
                                          const sym::EvalParams& params, std::optional<long> project) {
  std::vector<DriftRow> rows;
  for (const auto& [name, d] : energies) {
    const sym::CompiledDensity cd(d);
    DriftRow r;
    r.name = name;
    bool first = true;
    for (const auto& s : traj.states) {
      const double v = cd.evaluate(project ? s.truncated(*project) : s, params);
      if (first) {
        r.initial = v;
        first = false;
        continue;
      }
      r.max_abs_drift = std::max(r.max_abs_drift, std::abs(v - r.initial));
    }
    r.max_rel_drift = r.initial != 0.0 ? r.max_abs_drift / std::abs(r.initial) : r.max_abs_drift;
    rows.push_back(r);
  }
  return rows;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<long>& modes,
                           const std::vector<std::pair<std::string, sym::Density>>& energies, const sym::EvalParams& params) {
  std::ostringstream os;
  os << "t";
  for (long n : modes) os << ",re_" << n << ",im_" << n;
  for (const auto& [name, d] : energies) os << "," << name;
  os << "\n";
  std::vector<sym::CompiledDensity> compiled;
  for (const auto& [name, d] : energies) compiled.emplace_back(d);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    os << fmt17(traj.times[i]);
    for (long n : modes) os << "," << fmt17(traj.states[i][n].real()) << "," << fmt17(traj.states[i][n].imag());
    for (const auto& cd : compiled) os << "," << fmt17(cd.evaluate(traj.states[i], params));
    os << "\n";
  }
  return os.str();
}

nlohmann::json trajectory_json(const Trajectory& traj) {
  nlohmann::json j;
  j["family"] = to_string(traj.spec.family);
  j["delta"] = traj.spec.delta;
  j["resolution"] = traj.spec.resolution;
  j["truncation"] = traj.spec.truncation ? nlohmann::json(*traj.spec.truncation) : nlohmann::json(nullptr);
  j["nonlinear"] = traj.spec.nonlinear;
  j["scheme"] = "IFRK4";
  j["dt"] = traj.dt;
  j["t_final"] = traj.params.t_final;
  j["record_stride"] = traj.params.record_stride;
  nlohmann::json snaps = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.states.size(); ++i) snaps.push_back({{"t", traj.times[i]}, {"field", to_json(traj.states[i])}});
  j["snapshots"] = snaps;
  return j;
}

}  // namespace ilw
