#pragma once

// Separability verdicts for multipartite states and their loss reductions.
//
// Verdicts are three-valued. Separable is only reported with an exactness
// guarantee (diagonal or product structure, or PPT on a 2x2 / 2x3 cut);
// Entangled only with a violated witness or a negative partial transpose.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lossent/channels.hpp"
#include "lossent/tensor.hpp"

namespace lossent {

enum class Status { Separable, Entangled, Unknown };
const char* to_string(Status s);

struct Evidence {
  std::string test;
  std::string cut;  // bipartition label, frame label or empty
  double value = 0.0;
};

struct Verdict {
  Status status = Status::Unknown;
  /// Granularity for reduction classifications: fully_separable, biseparable,
  /// gme, npt_every_cut, npt_some_cut or unknown. Empty for plain tests.
  std::string level;
  std::vector<Evidence> evidence;
};

struct PptResult {
  double min_eig = 0.0;
  bool npt = false;
  /// PPT implies separability across this cut (2x2 or 2x3 dimensions).
  bool exact = false;
};

PptResult ppt_verdict(const DensityMatrix& rho, const Bipartition& cut, double npt_threshold = tol::kNpt);

struct WitnessOptions {
  bool bitflip_frames = true;
  /// Local-frame search for the multipartite witness (qubit states only).
  bool optimize_frames = true;
  std::size_t random_starts = 6;
  unsigned long long seed = 20240917ULL;
  /// Extra local frames: one 2x2 unitary per qubit.
  std::vector<std::vector<CMatrix>> user_frames;
  /// Projector-fidelity witness built from the dominant eigenvector.
  bool fidelity_witness = true;
  double npt_threshold = tol::kNpt;
  double witness_threshold = tol::kWitness;
};

/// Separable = biseparable (some cut certified product or exactly PPT-separable),
/// Entangled = genuinely multipartite entangled, Unknown otherwise. Per-cut PPT
/// values are always attached as evidence.
Verdict biseparability_verdict(const DensityMatrix& rho, const WitnessOptions& opts = {});

/// Separable if diagonal in a product basis or an exact product of
/// single-site states; Entangled if some bipartition is NPT.
Verdict fully_separable_proxy(const DensityMatrix& rho, double npt_threshold = tol::kNpt);

/// Combined classification used for loss reductions; sets Verdict::level.
/// Entangled means GME-certified or NPT across every bipartition.
Verdict classify_reduction(const DensityMatrix& rho, const WitnessOptions& opts = {});

/// Best multipartite witness value over local frames (bit flips, user frames
/// and, when enabled, a simplex search over product bases).
struct FrameSearch {
  double value = 0.0;
  std::string frame;
};
FrameSearch multipartite_witness_frame_search(const DensityMatrix& rho, const WitnessOptions& opts = {});

/// <psi|rho|psi> minus the largest squared Schmidt coefficient of psi over all
/// bipartitions, with psi the dominant eigenvector; positive certifies GME.
double fidelity_witness(const DensityMatrix& rho);

/// Squared Schmidt coefficients of psi across a cut, descending.
Eigen::VectorXd schmidt_spectrum(const PureState& psi, const Bipartition& cut);

using StateRef = std::variant<PureState, DensityMatrix>;

struct SubsetReport {
  IndexSet lost;
  Verdict verdict;
};

struct PlsResult {
  /// Separable: particle-lose separable; Entangled: robust; Unknown otherwise.
  Status status = Status::Unknown;
  std::optional<IndexSet> witness_set;
  std::string granularity;  // level of the witnessing reduction
  std::vector<SubsetReport> trace;
};

/// Scans party-level loss sets by size then lexicographically and returns the
/// first whose reduction is biseparable or fully separable.
PlsResult particle_lose_separable(const StateRef& state, const Ownership& own, const WitnessOptions& opts = {});

struct DepthOptions {
  LossMode mode = LossMode::Party;
  /// Largest loss-set size examined; 0 means every admissible size.
  std::size_t max_loss = 0;
  WitnessOptions witness;
};

struct DepthReport {
  /// Largest m such that every admissible loss set of size <= m left an
  /// Entangled reduction (bounded by the examined sizes).
  std::size_t depth = 0;
  LossMode mode = LossMode::Party;
  bool base_entangled = false;
  std::optional<std::size_t> unknown_at_size;  // first size with an Unknown verdict
  std::optional<IndexSet> first_failure;        // first non-Entangled loss set
  bool capped = false;     // stopped at max_loss with every set Entangled
  bool exhausted = false;  // every admissible size was Entangled
  std::vector<SubsetReport> trace;
};

DepthReport robustness_depth(const StateRef& state, const Ownership& own, const DepthOptions& opts = {});

/// Loss sets of the given size, admissible under the mode's bounds, in lexicographic order.
std::vector<IndexSet> admissible_loss_sets(const Ownership& own, LossMode mode, std::size_t size);

/// True/false/unknown answer to "every single-particle loss leaves a fully
/// separable state". Requires n >= 3 and a GME input.
Status ghz_characterization(const PureState& psi);

struct DickeDecomposition {
  std::vector<Complex> betas;       // index k: overlap with the uniform non-constant strings of sum k
  Complex ghz_beta{0.0, 0.0};       // weight of the constant strings
  std::vector<Complex> ghz_alphas;  // normalized constant-string amplitudes
  double residual = 0.0;            // norm of the part outside the spanned basis
};

DickeDecomposition symmetric_dicke_decompose(const PureState& psi, double tolerance = 1e-10);

/// Dominant eigenpair; returns the state when rho has purity 1 within `tolerance`.
std::optional<PureState> as_pure(const DensityMatrix& rho, double tolerance = 1e-10);

}  // namespace lossent
