#pragma once

// Correlator-based tests on qubit (and qudit) states: CHSH, the nonlinear
// two-qubit and multipartite witnesses, the qudit density witness, the W-state
// Svetlichny visibility threshold and Hardy-type probability constraints.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lossent/tensor.hpp"

namespace lossent {

/// Qubit observable n.(X, Y, Z) for a unit Bloch vector n.
class Observable {
public:
  explicit Observable(const Eigen::Vector3d& bloch);
  static Observable X() { return Observable(Eigen::Vector3d(1, 0, 0)); }
  static Observable Y() { return Observable(Eigen::Vector3d(0, 1, 0)); }
  static Observable Z() { return Observable(Eigen::Vector3d(0, 0, 1)); }

  const Eigen::Vector3d& bloch() const noexcept { return bloch_; }
  CMatrix matrix() const;

private:
  Eigen::Vector3d bloch_;
};

namespace pauli {
CMatrix I();
CMatrix X();
CMatrix Y();
CMatrix Z();
}  // namespace pauli

/// Tr(rho * (x)_i op_i); nullopt entries are identities. Qubits only.
double correlator(const DensityMatrix& rho, const std::vector<std::optional<Observable>>& obs);
/// Same with arbitrary 2x2 site operators; returns the complex trace.
Complex correlator_ops(const DensityMatrix& rho, const std::vector<CMatrix>& ops);

/// Two-qubit correlation matrix T_ij = <s_i (x) s_j>.
Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho2);

double chsh_value(const DensityMatrix& rho2, const Observable& a1, const Observable& a2,
                  const Observable& b1, const Observable& b2);

enum class Plane { XY, XZ };
const char* to_string(Plane p);
/// Unit observable at angle t in the plane: XY -> cos t X + sin t Y, XZ -> cos t X + sin t Z.
Observable plane_observable(Plane p, double t);

struct ChshMax {
  double value = 0.0;
  std::array<double, 4> angles{};  // a1, a2, b1, b2
};

/// Grid search over Bob's two angles (Alice responds optimally within the
/// plane) followed by a local simplex refinement.
ChshMax chsh_plane_max(const DensityMatrix& rho2, Plane plane, std::size_t grid = 64);

struct ChshScanRow {
  double theta = 0.0;
  double phi = 0.0;
  std::array<double, 3> value{};  // reductions losing A1, A2, A3
  bool triple_violation = false;
};

/// Plane maxima of the three two-qubit reductions of W(theta, phi) on a grid
/// over [0, pi/2]^2; flags points where all three exceed 2.
std::vector<ChshScanRow> simultaneous_chsh_scan(std::size_t theta_steps, std::size_t phi_steps,
                                                Plane plane, std::size_t grid = 48);

/// (<XX>-<YY>)^2 + (<XY>+<YX>)^2 - (1-<ZZ>)^2; positive certifies entanglement.
double nonlinear2_lhs(const DensityMatrix& rho2);
/// 4|rho_{00,11}|^2 - (rho_{01,01} + rho_{10,10})^2.
double nonlinear2_density_lhs(const DensityMatrix& rho2);

/// X applied to every qubit whose bit is set in `flips` (bit i <-> qubit i).
DensityMatrix bit_flip(const DensityMatrix& rho, std::size_t flips);

struct FramedValue {
  double value = 0.0;
  std::size_t flips = 0;
};
/// Largest nonlinear2_lhs over the four bit-flip frames.
FramedValue nonlinear2_bitflip_max(const DensityMatrix& rho2);

enum class WitnessForm { Density, PauliLiteral };

/// Density form: 4|rho_{0..0,1..1}|^2 - (1 - rho_{0..0,0..0} - rho_{1..1,1..1})^2.
/// PauliLiteral: the correlator expression scaled by 4^-n; its first term
/// carries (-1)^n, so it disagrees in sign with the density form for odd n.
double multipartite_witness_lhs(const DensityMatrix& rho, WitnessForm form = WitnessForm::Density);
/// Density form evaluated in the bit-flip frame `flips`.
double multipartite_witness_flipped(const DensityMatrix& rho, std::size_t flips);
/// Largest density-form value over all 2^n bit-flip frames.
FramedValue multipartite_witness_bitflip_max(const DensityMatrix& rho);

struct QuditTerm {
  std::size_t u = 0;
  double lhs = 0.0;    // 4 |rho_{u..u, v..v}|^2, v = d-1-u
  double bound = 0.0;  // sum of diagonal entries over {u, v}^n minus the two constant strings
  double value = 0.0;  // lhs - bound^2
};

struct QuditReport {
  std::size_t d = 0;
  std::vector<QuditTerm> terms;  // u < (d-1)/2
  double aggregate = 0.0;        // sum_u (2|rho_u| - bound_u)
  bool violated = false;
};

QuditReport qudit_witness_report(const DensityMatrix& rho);

struct SvetlichnyThreshold {
  double visibility = 1.0;  // min(4 / fmax, 1)
  double fmax = 0.0;
  double theta = 0.0;       // argmax in [0, pi]
  double delta = 0.0;       // alpha beta + alpha gamma + beta gamma
};

/// f(t) = 2 delta (sin 3t + sin t) - sin 3t + 3 sin t.
double svetlichny_f(double delta, double theta);
/// Grid seed of `grid` points on [0, pi] then golden-section refinement.
SvetlichnyThreshold svetlichny_w_visibility(double alpha, double beta, double gamma,
                                            std::size_t grid = 2048);

/// P(ab|xy) with a, b in {0,1} and x, y in {0,1,2}.
struct ProbTable {
  double p[2][2][3][3] = {};
  double& at(int a, int b, int x, int y) { return p[a][b][x][y]; }
  double at(int a, int b, int x, int y) const { return p[a][b][x][y]; }
  /// Throws unless entries are non-negative and each (x,y) block sums to 1.
  void validate(double tolerance = 1e-9) const;
};

struct ConstraintResult {
  std::string name;
  bool holds = false;
  double residual = 0.0;
};

struct HardyReport {
  std::vector<ConstraintResult> preconditions;  // correlator equality, product zero, equality, ordering
  ConstraintResult quadratic;                   // the inequality itself, residual = its LHS
  bool preconditions_hold = false;
  bool hardy_violation = false;                 // preconditions hold and quadratic > 0
};

HardyReport hardy_check(const ProbTable& t, double tolerance = 1e-9);

/// Outcome statistics of measuring settings x (Alice) and y (Bob) on a
/// two-qubit state; outcome 0 is the +1 eigenvalue.
ProbTable probability_table(const DensityMatrix& rho2, const std::array<Observable, 3>& alice,
                            const std::array<Observable, 3>& bob);
/// Settings 0 -> Z, 1 -> X, 2 -> Y.
std::array<Observable, 3> default_hardy_settings();

}  // namespace lossent
