#include "lossent/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "lossent/error.hpp"

namespace lossent {

namespace {

// Work (in complex multiply-adds) below which the kernels stay serial.
constexpr std::size_t kParallelThreshold = 1u << 16;

std::vector<std::size_t> strides_of(const DimVector& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

// Offsets (into the full index) of every basis state of the listed
// subsystems, enumerated big-endian over those subsystems.
std::vector<std::size_t> offsets_of(const DimVector& dims, const IndexSet& subsystems) {
  const auto strides = strides_of(dims);
  std::vector<std::size_t> out{0};
  for (std::size_t sub : subsystems) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[sub]);
    for (std::size_t base : out)
      for (std::size_t d = 0; d < dims[sub]; ++d) next.push_back(base + d * strides[sub]);
    out = std::move(next);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- DimVector

DimVector::DimVector(std::initializer_list<std::size_t> dims)
    : DimVector(std::vector<std::size_t>(dims)) {}

DimVector::DimVector(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidInput("dimension vector is empty", "dims");
  for (std::size_t d : dims_) {
    if (d < 2) throw InvalidInput("every local dimension must be at least 2", "dims");
    total_ *= d;
  }
}

std::vector<std::size_t> DimVector::digits(std::size_t index) const {
  std::vector<std::size_t> out(dims_.size());
  for (std::size_t i = dims_.size(); i-- > 0;) {
    out[i] = index % dims_[i];
    index /= dims_[i];
  }
  return out;
}

std::size_t DimVector::index_of(const std::vector<std::size_t>& digits) const {
  if (digits.size() != dims_.size())
    throw InvalidInput("basis label has " + std::to_string(digits.size()) + " digits, expected " +
                       std::to_string(dims_.size()));
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (digits[i] >= dims_[i])
      throw InvalidInput("digit " + std::to_string(digits[i]) + " out of range for subsystem " +
                         std::to_string(i) + " of dimension " + std::to_string(dims_[i]));
    idx = idx * dims_[i] + digits[i];
  }
  return idx;
}

DimVector DimVector::select(const IndexSet& subsystems) const {
  std::vector<std::size_t> out;
  out.reserve(subsystems.size());
  for (std::size_t s : subsystems) out.push_back(dims_.at(s));
  return DimVector(std::move(out));
}

std::size_t DimVector::product(const IndexSet& subsystems) const {
  std::size_t p = 1;
  for (std::size_t s : subsystems) p *= dims_.at(s);
  return p;
}

bool DimVector::all_equal(std::size_t d) const {
  return std::all_of(dims_.begin(), dims_.end(), [d](std::size_t x) { return x == d; });
}

std::string DimVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? "," : "") << dims_[i];
  os << ')';
  return os.str();
}

IndexSet complement(const IndexSet& subset, std::size_t n) {
  IndexSet out;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(subset.begin(), subset.end(), i) == subset.end()) out.push_back(i);
  return out;
}

IndexSet normalize_index_set(const IndexSet& subset, std::size_t n, const char* what) {
  IndexSet s = subset;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw InvalidInput(std::string(what) + ": repeated subsystem index");
  if (!s.empty() && s.back() >= n)
    throw InvalidInput(std::string(what) + ": subsystem index " + std::to_string(s.back()) +
                       " out of range (have " + std::to_string(n) + ")");
  return s;
}

// ---------------------------------------------------------------- PureState

PureState::PureState(CVector amps, DimVector dims) : amps_(std::move(amps)), dims_(std::move(dims)) {
  if (static_cast<std::size_t>(amps_.size()) != dims_.total())
    throw InvalidInput("amplitude vector length " + std::to_string(amps_.size()) +
                       " does not match dims " + dims_.to_string());
  const double norm2 = amps_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol::kNorm)
    throw InvalidInput("state is not normalized (norm^2 = " + std::to_string(norm2) + ")");
}

PureState PureState::normalized(CVector amps, DimVector dims) {
  const double n = amps.norm();
  if (n == 0.0) throw InvalidInput("zero amplitude vector");
  amps /= n;
  return PureState(std::move(amps), std::move(dims));
}

DensityMatrix PureState::projector() const {
  return DensityMatrix::unchecked(amps_ * amps_.adjoint(), dims_);
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(CMatrix mat, DimVector dims, NoCheck)
    : mat_(std::move(mat)), dims_(std::move(dims)) {
  check_shape_hermitian_trace();
}

DensityMatrix::DensityMatrix(CMatrix mat, DimVector dims)
    : DensityMatrix(std::move(mat), std::move(dims), NoCheck{}) {
  const double lo = min_eigenvalue(mat_);
  if (lo < tol::kPsdSlack)
    throw InvalidInput("density matrix is not positive semidefinite (min eigenvalue " +
                       std::to_string(lo) + ")");
}

DensityMatrix DensityMatrix::unchecked(CMatrix mat, DimVector dims) {
  return DensityMatrix(std::move(mat), std::move(dims), NoCheck{});
}

DensityMatrix DensityMatrix::maximally_mixed(DimVector dims) {
  const auto n = static_cast<Eigen::Index>(dims.total());
  CMatrix m = CMatrix::Identity(n, n) / static_cast<double>(n);
  return unchecked(std::move(m), std::move(dims));
}

void DensityMatrix::check_shape_hermitian_trace() const {
  if (mat_.rows() != mat_.cols())
    throw InvalidInput("density matrix must be square");
  if (static_cast<std::size_t>(mat_.rows()) != dims_.total())
    throw InvalidInput("density matrix size " + std::to_string(mat_.rows()) +
                       " does not match dims " + dims_.to_string());
  if (!is_hermitian(mat_, tol::kHermitian)) throw InvalidInput("density matrix is not Hermitian");
  const Complex tr = mat_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol::kTrace)
    throw InvalidInput("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
}

double DensityMatrix::purity() const { return (mat_ * mat_).trace().real(); }

double DensityMatrix::max_off_diagonal() const {
  double m = 0.0;
  for (Eigen::Index c = 0; c < mat_.cols(); ++c)
    for (Eigen::Index r = 0; r < mat_.rows(); ++r)
      if (r != c) m = std::max(m, std::abs(mat_(r, c)));
  return m;
}

DensityMatrix mix(const std::vector<double>& weights, const std::vector<DensityMatrix>& states) {
  if (weights.size() != states.size() || states.empty())
    throw InvalidInput("mixture needs one weight per component");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw InvalidInput("mixture weight is negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("mixture weights do not sum to 1");
  CMatrix acc = CMatrix::Zero(states[0].mat().rows(), states[0].mat().cols());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!(states[i].dims() == states[0].dims()))
      throw InvalidInput("mixture components have different dims");
    acc += weights[i] * states[i].mat();
  }
  return DensityMatrix::unchecked(std::move(acc), states[0].dims());
}

// -------------------------------------------------------------- Bipartition

void Bipartition::validate(std::size_t n) const {
  if (left.empty() || right.empty()) throw InvalidInput("bipartition sides must be nonempty");
  IndexSet all = left;
  all.insert(all.end(), right.begin(), right.end());
  std::sort(all.begin(), all.end());
  if (all.size() != n || std::adjacent_find(all.begin(), all.end()) != all.end() ||
      all.back() != n - 1)
    throw InvalidInput("bipartition does not partition the subsystems");
}

Bipartition Bipartition::from_left(IndexSet left, std::size_t n) {
  left = normalize_index_set(left, n, "bipartition");
  Bipartition b{left, complement(left, n)};
  b.validate(n);
  return b;
}

std::string Bipartition::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < left.size(); ++i) os << (i ? "," : "") << left[i];
  os << '|';
  for (std::size_t i = 0; i < right.size(); ++i) os << (i ? "," : "") << right[i];
  return os.str();
}

std::vector<Bipartition> all_bipartitions(std::size_t n) {
  std::vector<Bipartition> out;
  if (n < 2) return out;
  const std::size_t limit = std::size_t{1} << (n - 1);
  for (std::size_t mask = 1; mask < limit; ++mask) {
    IndexSet left;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) left.push_back(i);
    out.push_back(Bipartition{left, complement(left, n)});
  }
  return out;
}

// ------------------------------------------------------------------ kernels

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

namespace {

IndexSet checked_traced(const DimVector& dims, const IndexSet& traced) {
  IndexSet t = normalize_index_set(traced, dims.size(), "partial trace");
  if (t.size() == dims.size()) throw InvalidInput("partial trace leaves an empty remainder");
  return t;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const IndexSet& traced) {
  const DimVector& dims = rho.dims();
  const IndexSet lost = checked_traced(dims, traced);
  if (lost.empty()) return rho;
  const IndexSet kept = complement(lost, dims.size());
  const auto kept_off = offsets_of(dims, kept);
  const auto lost_off = offsets_of(dims, lost);
  const auto nk = static_cast<std::ptrdiff_t>(kept_off.size());
  const CMatrix& m = rho.mat();
  CMatrix out(nk, nk);
  const bool parallel = kept_off.size() * kept_off.size() * lost_off.size() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t c = 0; c < nk; ++c) {
    for (std::ptrdiff_t r = 0; r < nk; ++r) {
      Complex acc{0.0, 0.0};
      for (std::size_t l : lost_off)
        acc += m(static_cast<Eigen::Index>(kept_off[r] + l),
                 static_cast<Eigen::Index>(kept_off[c] + l));
      out(r, c) = acc;
    }
  }
  return DensityMatrix::unchecked(std::move(out), dims.select(kept));
}

DensityMatrix partial_trace(const PureState& psi, const IndexSet& traced) {
  const DimVector& dims = psi.dims();
  const IndexSet lost = checked_traced(dims, traced);
  if (lost.empty()) return psi.projector();
  const IndexSet kept = complement(lost, dims.size());
  const auto kept_off = offsets_of(dims, kept);
  const auto lost_off = offsets_of(dims, lost);
  CMatrix block(static_cast<Eigen::Index>(kept_off.size()),
                static_cast<Eigen::Index>(lost_off.size()));
  for (std::size_t r = 0; r < kept_off.size(); ++r)
    for (std::size_t l = 0; l < lost_off.size(); ++l)
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) =
          psi.amps()[static_cast<Eigen::Index>(kept_off[r] + lost_off[l])];
  CMatrix out = block * block.adjoint();
  return DensityMatrix::unchecked(std::move(out), dims.select(kept));
}

CMatrix partial_transpose(const CMatrix& mat, const DimVector& dims, const IndexSet& transposed) {
  if (static_cast<std::size_t>(mat.rows()) != dims.total() || mat.rows() != mat.cols())
    throw InvalidInput("partial transpose: matrix does not match dims " + dims.to_string());
  const IndexSet t = normalize_index_set(transposed, dims.size(), "partial transpose");
  const IndexSet k = complement(t, dims.size());
  const auto t_off = offsets_of(dims, t);
  const auto k_off = offsets_of(dims, k);
  const auto nt = static_cast<std::ptrdiff_t>(t_off.size());
  CMatrix out(mat.rows(), mat.cols());
  const bool parallel = dims.total() * dims.total() >= kParallelThreshold;
  // out(a b, c e) = mat(c b, a e) where a,c range over the transposed block.
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t c = 0; c < nt; ++c)
    for (std::size_t e : k_off)
      for (std::ptrdiff_t a = 0; a < nt; ++a)
        for (std::size_t b : k_off)
          out(static_cast<Eigen::Index>(t_off[a] + b), static_cast<Eigen::Index>(t_off[c] + e)) =
              mat(static_cast<Eigen::Index>(t_off[c] + b), static_cast<Eigen::Index>(t_off[a] + e));
  return out;
}

CMatrix partial_transpose(const DensityMatrix& rho, const Bipartition& cut) {
  cut.validate(rho.num_subsystems());
  return partial_transpose(rho.mat(), rho.dims(), cut.left);
}

namespace {

std::vector<std::size_t> permutation_index_map(const DimVector& dims,
                                               const std::vector<std::size_t>& order) {
  if (order.size() != dims.size()) throw InvalidInput("permutation has wrong length");
  std::vector<std::size_t> check = order;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != i) throw InvalidInput("subsystem order is not a permutation");
  // Enumerating the input offsets in output-digit order yields, for output
  // index j, the input index it draws from.
  return offsets_of(dims, order);
}

}  // namespace

CMatrix permute_subsystems(const CMatrix& mat, const DimVector& dims,
                           const std::vector<std::size_t>& order) {
  const auto src = permutation_index_map(dims, order);
  const auto n = static_cast<std::ptrdiff_t>(src.size());
  CMatrix out(n, n);
  const bool parallel = src.size() * src.size() >= kParallelThreshold;
#pragma omp parallel for schedule(static) if (parallel)
  for (std::ptrdiff_t c = 0; c < n; ++c)
    for (std::ptrdiff_t r = 0; r < n; ++r)
      out(r, c) = mat(static_cast<Eigen::Index>(src[r]), static_cast<Eigen::Index>(src[c]));
  return out;
}

CVector permute_subsystems(const CVector& vec, const DimVector& dims,
                           const std::vector<std::size_t>& order) {
  const auto src = permutation_index_map(dims, order);
  CVector out(vec.size());
  for (std::size_t j = 0; j < src.size(); ++j)
    out[static_cast<Eigen::Index>(j)] = vec[static_cast<Eigen::Index>(src[j])];
  return out;
}

bool is_hermitian(const CMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r <= c; ++r)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tolerance) return false;
  return true;
}

Eigen::VectorXd eigenvalues(const CMatrix& h) {
  if (!is_hermitian(h, tol::kHermitianInput))
    throw InvalidInput("eigenvalue request on a non-Hermitian matrix");
  // Symmetrize so that the solver sees an exactly Hermitian input.
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double min_eigenvalue(const CMatrix& h) { return eigenvalues(h).minCoeff(); }

RitzPair lanczos_extreme(const CMatrix& h, bool smallest, std::size_t max_steps, double tolerance) {
  if (h.rows() != h.cols() || h.rows() == 0) throw InvalidInput("Lanczos needs a nonempty square matrix");
  const Eigen::Index n = h.rows();
  const auto m_max = static_cast<Eigen::Index>(std::min<std::size_t>(max_steps, static_cast<std::size_t>(n)));
  std::mt19937_64 rng(0x5eed1a2c);
  std::normal_distribution<double> gauss;
  CVector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = Complex(gauss(rng), gauss(rng));
  q.normalize();

  CMatrix basis(n, m_max);
  std::vector<double> alpha, beta;
  RitzPair best;
  for (Eigen::Index j = 0; j < m_max; ++j) {
    basis.col(j) = q;
    CVector w = h * q;
    alpha.push_back(q.dot(w).real());
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(j + 1) * (basis.leftCols(j + 1).adjoint() * w);
    const double b = w.norm();

    const auto k = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::Index pick = smallest ? 0 : k - 1;
    const double resid = b * std::abs(es.eigenvectors()(k - 1, pick));
    if (resid < tolerance || b < tolerance || j + 1 == m_max) {
      CVector v = basis.leftCols(k) * es.eigenvectors().col(pick).cast<Complex>();
      v.normalize();
      best.vector = v;
      best.value = v.dot(h * v).real();
      best.residual = (h * v - best.value * v).norm();
      return best;
    }
    beta.push_back(b);
    q = w / b;
  }
  return best;
}

double expectation(const DensityMatrix& rho, const CMatrix& obs) {
  if (obs.rows() != rho.mat().rows() || obs.cols() != rho.mat().cols())
    throw InvalidInput("observable dimension " + std::to_string(obs.rows()) +
                       " does not match state dimension " + std::to_string(rho.dim()));
  // Tr(rho obs) = sum_ij rho_ij obs_ji
  const Complex v = rho.mat().cwiseProduct(obs.transpose()).sum();
  const double scale = std::max(1.0, obs.cwiseAbs().maxCoeff());
  if (std::abs(v.imag()) > tol::kImagDiscard * scale)
    throw InvalidInput("expectation value has an imaginary part; observable not Hermitian?");
  return v.real();
}

}  // namespace lossent
