#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ilw/density.hpp"
#include "ilw/spectral.hpp"

namespace ilw::sym {

class EvaluationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EvalParams {
  double delta = std::numeric_limits<double>::quiet_NaN();
  std::optional<long> high_cutoff = std::nullopt;  // N for P_{>N} blocks
};

// An integrated density compiled into operator trees, one per monomial
// shape, with orbit-compressed polynomials.  Reusable across fields.
class CompiledDensity {
 public:
  explicit CompiledDensity(const Density& d);

  std::complex<double> evaluate_complex(const SpectralField& u, const EvalParams& p) const;
  // Real part; throws if the imaginary residue exceeds 1e-9 of the summed magnitude.
  double evaluate(const SpectralField& u, const EvalParams& p) const;

  bool needs_delta() const { return needs_delta_; }
  bool needs_cutoff() const { return needs_cutoff_; }
  int max_degree() const { return max_degree_; }

  struct Node {
    std::uint16_t mask = 0;
    std::vector<BlockKind> multipliers;
    std::vector<int> children;  // node indices
    std::vector<int> leaves;
  };
  struct Shape {
    int degree = 0;
    std::complex<double> prefactor;  // i^ipow·sign, δ^dpow applied at evaluation
    int dpow = 0;
    std::vector<Node> nodes;  // children precede parents; last is the root
    std::vector<std::pair<std::vector<unsigned>, double>> monomials;
  };
  const std::vector<Shape>& shapes() const { return shapes_; }

 private:
  std::vector<Shape> shapes_;
  bool needs_delta_ = false;
  bool needs_cutoff_ = false;
  int max_degree_ = 0;
};

double evaluate(const Density& d, const SpectralField& u, const EvalParams& p = {});

// Laminar representative of a canonical key: bit j set means block j is
// replaced by its complement.  Throws if none exists.
std::uint32_t laminar_flips(const TermKey& key);

}  // namespace ilw::sym
