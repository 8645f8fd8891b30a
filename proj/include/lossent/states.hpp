#pragma once

// Named state families: GHZ, generalized Dicke, W, bipartite Schmidt states,
// white-noise mixtures and literal amplitude maps.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lossent/tensor.hpp"

namespace lossent {

struct GhzParams {
  std::size_t n = 3;
  std::size_t d = 2;
  std::vector<double> amplitudes;  // alpha_j on |j...j>, length d
};

/// sum_j alpha_j |j j ... j>.
PureState ghz(const GhzParams& p);
/// cos(theta)|0...0> + sin(theta)|1...1>.
PureState ghz_theta(std::size_t n, double theta);

using Composition = std::vector<std::size_t>;

struct DickeParams {
  std::size_t n = 3;
  std::size_t d = 2;
  std::size_t k = 1;
  /// Amplitude per digit string summing to k; nullopt selects the uniform state.
  std::optional<std::map<Composition, double>> coeffs;
};

/// Digit strings of length n over {0..d-1} summing to k, in basis order.
std::vector<Composition> compositions(std::size_t n, std::size_t d, std::size_t k);
/// Exact number of such strings.
unsigned long long composition_count(std::size_t n, std::size_t d, std::size_t k);

/// Generalized Dicke state. Explicit coefficients must cover every
/// composition with a nonzero value; they are normalized.
PureState dicke(const DickeParams& p);

/// sum_k beta_k |D_k>; parts share n and d and have distinct k.
PureState dicke_superposition(const std::vector<double>& betas, const std::vector<DickeParams>& parts);

/// alpha|001> + beta|010> + gamma|100>.
PureState w_state(double alpha, double beta, double gamma);
/// W amplitudes at alpha = sin t cos p, beta = sin t sin p, gamma = cos t.
PureState w_state_angles(double theta, double phi);

/// sum_j s_j |j j>. With `require_entangled`, at least two s_j must be nonzero.
PureState bipartite_pure(const std::vector<double>& schmidt, bool require_entangled = true);

/// v |psi><psi| + (1-v) I / D.
DensityMatrix noisy_mix(const PureState& psi, double v);

/// Parses a basis label: a plain digit string ("0120") when every local
/// dimension is at most 10, otherwise comma separated ("0,11,3").
std::vector<std::size_t> parse_basis_label(const std::string& label, const DimVector& dims);

PureState from_amplitudes(const DimVector& dims, const std::map<std::string, Complex>& amps);
PureState from_amplitudes(const DimVector& dims,
                          const std::vector<std::pair<std::vector<std::size_t>, Complex>>& amps);

/// Nonzero amplitudes keyed by label, the inverse of from_amplitudes.
std::map<std::string, Complex> to_amplitude_map(const PureState& psi, double cutoff = 1e-15);
std::string basis_label(const std::vector<std::size_t>& digits, const DimVector& dims);

/// True if psi is invariant under every transposition of adjacent subsystems.
bool is_permutation_symmetric(const PureState& psi, double tolerance = 1e-10);

}  // namespace lossent
