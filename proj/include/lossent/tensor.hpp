#pragma once

// Dense complex linear algebra over multipartite Hilbert spaces.
//
// Basis ordering is big-endian: subsystem 0 is the most significant digit of
// a basis index, matching left-to-right ket labels |a b c>.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lossent {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using IndexSet = std::vector<std::size_t>;

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kNorm = 1e-12;
inline constexpr double kPsdSlack = -1e-9;
inline constexpr double kNpt = -1e-9;        // min eigenvalue below this counts as NPT
inline constexpr double kWitness = 1e-9;     // witness LHS above this counts as a violation
inline constexpr double kHermitianInput = 1e-9;
inline constexpr double kImagDiscard = 1e-10;
inline constexpr double kOffDiagonal = 1e-10;
}  // namespace tol

/// Local dimension of every subsystem, most significant first.
class DimVector {
public:
  DimVector() = default;
  DimVector(std::initializer_list<std::size_t> dims);
  explicit DimVector(std::vector<std::size_t> dims);

  std::size_t size() const noexcept { return dims_.size(); }
  std::size_t operator[](std::size_t i) const { return dims_[i]; }
  std::size_t total() const noexcept { return total_; }
  const std::vector<std::size_t>& values() const noexcept { return dims_; }
  auto begin() const noexcept { return dims_.begin(); }
  auto end() const noexcept { return dims_.end(); }

  /// Big-endian digits of a basis index.
  std::vector<std::size_t> digits(std::size_t index) const;
  std::size_t index_of(const std::vector<std::size_t>& digits) const;
  /// Dimensions of the listed subsystems, in the listed order.
  DimVector select(const IndexSet& subsystems) const;
  std::size_t product(const IndexSet& subsystems) const;
  bool all_equal(std::size_t d) const;

  std::string to_string() const;

  friend bool operator==(const DimVector&, const DimVector&) = default;

private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Sorted complement of `subset` within {0, ..., n-1}.
IndexSet complement(const IndexSet& subset, std::size_t n);
/// Throws InvalidInput unless `subset` holds distinct indices below n.
IndexSet normalize_index_set(const IndexSet& subset, std::size_t n, const char* what);

class DensityMatrix;

/// Normalized amplitude vector.
class PureState {
public:
  PureState(CVector amps, DimVector dims);

  /// Divides by the norm; throws if the norm is zero.
  static PureState normalized(CVector amps, DimVector dims);

  const CVector& amps() const noexcept { return amps_; }
  const DimVector& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }
  Complex amplitude(const std::vector<std::size_t>& digits) const {
    return amps_[static_cast<Eigen::Index>(dims_.index_of(digits))];
  }

  DensityMatrix projector() const;

private:
  CVector amps_;
  DimVector dims_;
};

/// Hermitian, unit-trace, positive semidefinite matrix with subsystem labels.
class DensityMatrix {
public:
  /// Validates every invariant (Hermiticity, trace, PSD).
  DensityMatrix(CMatrix mat, DimVector dims);

  /// For results of trace-preserving operations on already valid states:
  /// checks shape, Hermiticity and trace but skips the eigenvalue test.
  static DensityMatrix unchecked(CMatrix mat, DimVector dims);

  static DensityMatrix maximally_mixed(DimVector dims);

  const CMatrix& mat() const noexcept { return mat_; }
  const DimVector& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }
  Complex operator()(std::size_t r, std::size_t c) const {
    return mat_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  double purity() const;
  /// Largest off-diagonal modulus.
  double max_off_diagonal() const;

private:
  struct NoCheck {};
  DensityMatrix(CMatrix mat, DimVector dims, NoCheck);
  void check_shape_hermitian_trace() const;

  CMatrix mat_;
  DimVector dims_;
};

/// Convex combination sum_i w_i rho_i; weights must be non-negative and sum to 1.
DensityMatrix mix(const std::vector<double>& weights, const std::vector<DensityMatrix>& states);

struct Bipartition {
  IndexSet left;
  IndexSet right;

  /// Throws unless left/right partition {0..n-1} and both are nonempty.
  void validate(std::size_t n) const;
  static Bipartition from_left(IndexSet left, std::size_t n);
  std::string to_string() const;
};

/// Every unordered bipartition of n subsystems; the last subsystem is always
/// on the right. Order follows the bitmask of the left block.
std::vector<Bipartition> all_bipartitions(std::size_t n);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

/// Traces out `traced`; survivors keep their original relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const IndexSet& traced);
/// Same as partial_trace(psi.projector(), traced) without forming the full projector.
DensityMatrix partial_trace(const PureState& psi, const IndexSet& traced);

/// Transposes the digits of the listed subsystems.
CMatrix partial_transpose(const CMatrix& mat, const DimVector& dims, const IndexSet& transposed);
CMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& cut);

/// Reorders subsystems: output subsystem i is input subsystem order[i].
CMatrix permute_subsystems(const CMatrix& mat, const DimVector& dims,
                           const std::vector<std::size_t>& order);
CVector permute_subsystems(const CVector& vec, const DimVector& dims,
                           const std::vector<std::size_t>& order);

/// Smallest eigenvalue of a Hermitian matrix. Throws InvalidInput if the
/// input departs from Hermiticity by more than tol::kHermitianInput.
double min_eigenvalue(const CMatrix& h);
/// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd eigenvalues(const CMatrix& h);

struct RitzPair {
  double value = 0.0;  // Rayleigh quotient of `vector`
  CVector vector;
  double residual = 0.0;  // |h v - value v|
};

/// Smallest (or largest) eigenpair of a Hermitian matrix by Lanczos with full
/// reorthogonalization from a fixed pseudo-random start. The value is a
/// Rayleigh quotient, so it never overshoots the true extreme eigenvalue.
RitzPair lanczos_extreme(const CMatrix& h, bool smallest, std::size_t max_steps = 160, double tolerance = 1e-12);

/// Tr(rho * obs), checked to be real.
double expectation(const DensityMatrix& rho, const CMatrix& obs);

bool is_hermitian(const CMatrix& m, double tolerance);

// Serial, digit-by-digit implementations kept as test oracles and benchmark
// baselines for the blocked/OpenMP kernels above.
namespace reference {
CMatrix partial_trace(const CMatrix& mat, const DimVector& dims, const IndexSet& traced);
CMatrix partial_transpose(const CMatrix& mat, const DimVector& dims, const IndexSet& transposed);
CMatrix permute_subsystems(const CMatrix& mat, const DimVector& dims,
                           const std::vector<std::size_t>& order);
}  // namespace reference

}  // namespace lossent
