#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ilw/density.hpp"
#include "ilw/evaluate.hpp"
#include "ilw/multipliers.hpp"
#include "ilw/spectral.hpp"

namespace ilw {

// ∂ₜu = 𝒟u + ∂ₓ(u²) with the dispersive operator of the family
// (ILW: G_δ∂ₓ², scaled ILW: G̃_δ∂ₓ², BO: H∂ₓ², KdV: −⅓∂ₓ³).
struct EvolutionSpec {
  Dispersion family = Dispersion::ILW;
  double delta = 1.0;
  std::optional<long> truncation = std::nullopt;  // Galerkin cutoff N of the nonlinearity
  long resolution = 64;            // working cutoff M of the state
  bool nonlinear = true;
};

struct IntegratorParams {
  double dt = 0.0;  // ≤ 0 selects default_dt
  double t_final = 1.0;
  int record_stride = 1;
  double blowup_factor = 1e6;  // abort when ‖u‖_{L²} exceeds this multiple of its initial value (+1)
};

struct Trajectory {
  EvolutionSpec spec;
  IntegratorParams params;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<SpectralField> states;
};

class EvolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_string(Dispersion family);
Dispersion family_from_string(const std::string& s);

// λ(n) with ∂ₜû(n) = λ(n)û(n) + nonlinear part; purely imaginary.
std::complex<double> linear_symbol(const EvolutionSpec& spec, long n);

// ∂ₓ(u²), or P_N∂ₓ(P_N u)² when truncated, on the modes 1..resolution.
SpectralField nonlinear_term(const EvolutionSpec& spec, const SpectralField& u);

// 0.5 / max_{n ≤ M} |λ(n)|.
double default_dt(const EvolutionSpec& spec);

// Integrating-factor RK4.  The initial state is padded or cut to the working cutoff.
Trajectory evolve(const EvolutionSpec& spec, const SpectralField& u0, const IntegratorParams& params);

// One application of the time-t flow map (no recording).
SpectralField flow(const EvolutionSpec& spec, const SpectralField& u0, double t, double dt);

struct DriftRow {
  std::string name;
  double initial = 0.0;
  double max_abs_drift = 0.0;
  double max_rel_drift = 0.0;
};

// Energies evaluated along the trajectory; with `project` they see P_N u(t).
std::vector<DriftRow> conservation_report(const Trajectory& traj, const std::vector<std::pair<std::string, sym::Density>>& energies,
                                          const sym::EvalParams& params, std::optional<long> project = std::nullopt);

// CSV rows: t, Re/Im of the listed modes, then one column per energy.
std::string trajectory_csv(const Trajectory& traj, const std::vector<long>& modes,
                           const std::vector<std::pair<std::string, sym::Density>>& energies, const sym::EvalParams& params);
nlohmann::json trajectory_json(const Trajectory& traj);

}  // namespace ilw
