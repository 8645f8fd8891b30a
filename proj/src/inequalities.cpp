#include "lossent/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lossent/error.hpp"
#include "lossent/optimize.hpp"
#include "lossent/states.hpp"

namespace lossent {

using std::numbers::pi;

namespace pauli {
CMatrix I() { return CMatrix::Identity(2, 2); }
CMatrix X() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix Y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
CMatrix Z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

Observable::Observable(const Eigen::Vector3d& bloch) : bloch_(bloch) {
  if (std::abs(bloch.norm() - 1.0) > 1e-12) throw InvalidInput("observable Bloch vector is not unit length");
}

CMatrix Observable::matrix() const {
  return bloch_[0] * pauli::X() + bloch_[1] * pauli::Y() + bloch_[2] * pauli::Z();
}

namespace {

void require_qubits(const DensityMatrix& rho, const char* what) {
  if (!rho.dims().all_equal(2)) throw InvalidInput(std::string(what) + ": qubit subsystems only", "dims");
}

void require_two_qubits(const DensityMatrix& rho, const char* what) {
  require_qubits(rho, what);
  if (rho.num_subsystems() != 2) throw InvalidInput(std::string(what) + ": two-qubit state required", "dims");
}

std::size_t all_ones(std::size_t n) { return (std::size_t{1} << n) - 1; }

// Subsystem i (most significant first) owns bit n-1-i of the basis index.
std::size_t flip_mask(std::size_t flips, std::size_t n) {
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (flips >> i & 1u) m |= std::size_t{1} << (n - 1 - i);
  return m;
}

}  // namespace

Complex correlator_ops(const DensityMatrix& rho, const std::vector<CMatrix>& ops) {
  require_qubits(rho, "correlator");
  const std::size_t n = rho.num_subsystems();
  if (ops.size() != n) throw InvalidInput("correlator: one operator per subsystem required");
  struct Entry {
    std::size_t r, c;
    Complex v;
  };
  // Nonzero entries of the tensor product, built site by site.
  std::vector<Entry> acc{{0, 0, 1.0}};
  for (const auto& o : ops) {
    if (o.rows() != 2 || o.cols() != 2) throw InvalidInput("correlator: site operators must be 2x2");
    std::vector<Entry> next;
    for (const auto& e : acc)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          if (o(i, j) != Complex(0.0))
            next.push_back({e.r * 2 + static_cast<std::size_t>(i), e.c * 2 + static_cast<std::size_t>(j),
                            e.v * o(i, j)});
    acc = std::move(next);
  }
  // Tr(rho O) = sum_{r,c} O(r,c) rho(c,r)
  Complex t{0.0, 0.0};
  for (const auto& e : acc) t += e.v * rho(e.c, e.r);
  return t;
}

double correlator(const DensityMatrix& rho, const std::vector<std::optional<Observable>>& obs) {
  std::vector<CMatrix> ops;
  for (const auto& o : obs) ops.push_back(o ? o->matrix() : pauli::I());
  const Complex t = correlator_ops(rho, ops);
  if (std::abs(t.imag()) > tol::kImagDiscard) throw InvalidInput("correlator has an imaginary part");
  return t.real();
}

Eigen::Matrix3d correlation_matrix(const DensityMatrix& rho2) {
  require_two_qubits(rho2, "correlation matrix");
  const CMatrix s[3] = {pauli::X(), pauli::Y(), pauli::Z()};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = correlator_ops(rho2, {s[i], s[j]}).real();
  return t;
}

double chsh_value(const DensityMatrix& rho2, const Observable& a1, const Observable& a2, const Observable& b1,
                  const Observable& b2) {
  require_two_qubits(rho2, "chsh");
  const Eigen::Matrix3d t = correlation_matrix(rho2);
  auto e = [&](const Observable& a, const Observable& b) { return a.bloch().dot(t * b.bloch()); };
  return e(a1, b1) + e(a1, b2) + e(a2, b1) - e(a2, b2);
}

const char* to_string(Plane p) { return p == Plane::XY ? "xy" : "xz"; }

Observable plane_observable(Plane p, double t) {
  return p == Plane::XY ? Observable(Eigen::Vector3d(std::cos(t), std::sin(t), 0.0))
                        : Observable(Eigen::Vector3d(std::cos(t), 0.0, std::sin(t)));
}

ChshMax chsh_plane_max(const DensityMatrix& rho2, Plane plane, std::size_t grid) {
  require_two_qubits(rho2, "chsh");
  if (grid < 4) throw InvalidInput("chsh grid needs at least 4 points", "grid");
  const Eigen::Matrix3d t = correlation_matrix(rho2);
  const int second = plane == Plane::XY ? 1 : 2;
  Eigen::Matrix2d m;
  m << t(0, 0), t(0, second), t(second, 0), t(second, second);
  auto unit = [](double a) { return Eigen::Vector2d(std::cos(a), std::sin(a)); };
  // For fixed Bob settings Alice's best in-plane response is the direction of
  // M(b1 +- b2), so the value reduces to two vector norms.
  auto value = [&](double b1, double b2) {
    return (m * (unit(b1) + unit(b2))).norm() + (m * (unit(b1) - unit(b2))).norm();
  };
  ChshMax best;
  best.value = -1.0;
  double bb1 = 0.0, bb2 = 0.0;
  for (std::size_t i = 0; i < grid; ++i)
    for (std::size_t j = 0; j < grid; ++j) {
      const double b1 = 2.0 * pi * static_cast<double>(i) / static_cast<double>(grid);
      const double b2 = 2.0 * pi * static_cast<double>(j) / static_cast<double>(grid);
      const double v = value(b1, b2);
      if (v > best.value) {
        best.value = v;
        bb1 = b1;
        bb2 = b2;
      }
    }
  const auto refined = opt::simplex_max([&](const std::vector<double>& x) { return value(x[0], x[1]); },
                                        {bb1, bb2}, pi / static_cast<double>(grid), 500, 1e-12);
  if (refined.fx > best.value) {
    best.value = refined.fx;
    bb1 = refined.x[0];
    bb2 = refined.x[1];
  }
  const Eigen::Vector2d p = m * (unit(bb1) + unit(bb2));
  const Eigen::Vector2d q = m * (unit(bb1) - unit(bb2));
  best.angles = {std::atan2(p[1], p[0]), std::atan2(q[1], q[0]), bb1, bb2};
  return best;
}

std::vector<ChshScanRow> simultaneous_chsh_scan(std::size_t theta_steps, std::size_t phi_steps, Plane plane,
                                                std::size_t grid) {
  if (theta_steps < 2 || phi_steps < 2) throw InvalidInput("scan needs at least 2 steps per axis", "grid");
  std::vector<ChshScanRow> rows(theta_steps * phi_steps);
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    const std::size_t i = static_cast<std::size_t>(idx) / phi_steps;
    const std::size_t j = static_cast<std::size_t>(idx) % phi_steps;
    ChshScanRow& row = rows[static_cast<std::size_t>(idx)];
    row.theta = 0.5 * pi * static_cast<double>(i) / static_cast<double>(theta_steps - 1);
    row.phi = 0.5 * pi * static_cast<double>(j) / static_cast<double>(phi_steps - 1);
    const PureState w = w_state_angles(row.theta, row.phi);
    bool all = true;
    for (std::size_t k = 0; k < 3; ++k) {
      row.value[k] = chsh_plane_max(partial_trace(w, {k}), plane, grid).value;
      all = all && row.value[k] > 2.0 + tol::kWitness;
    }
    row.triple_violation = all;
  }
  return rows;
}

double nonlinear2_lhs(const DensityMatrix& rho2) {
  require_two_qubits(rho2, "nonlinear witness");
  const auto c = [&](const CMatrix& a, const CMatrix& b) { return correlator_ops(rho2, {a, b}).real(); };
  const CMatrix x = pauli::X(), y = pauli::Y(), z = pauli::Z();
  const double t1 = c(x, x) - c(y, y);
  const double t2 = c(x, y) + c(y, x);
  const double t3 = 1.0 - c(z, z);
  return t1 * t1 + t2 * t2 - t3 * t3;
}

double nonlinear2_density_lhs(const DensityMatrix& rho2) {
  require_two_qubits(rho2, "nonlinear witness");
  const double coh = std::abs(rho2(0, 3));
  const double pop = rho2(1, 1).real() + rho2(2, 2).real();
  return 4.0 * coh * coh - pop * pop;
}

DensityMatrix bit_flip(const DensityMatrix& rho, std::size_t flips) {
  require_qubits(rho, "bit flip");
  const std::size_t m = flip_mask(flips, rho.num_subsystems());
  const auto d = static_cast<Eigen::Index>(rho.dim());
  CMatrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r)
      out(r, c) = rho.mat()(static_cast<Eigen::Index>(static_cast<std::size_t>(r) ^ m),
                            static_cast<Eigen::Index>(static_cast<std::size_t>(c) ^ m));
  return DensityMatrix::unchecked(std::move(out), rho.dims());
}

FramedValue nonlinear2_bitflip_max(const DensityMatrix& rho2) {
  FramedValue best{nonlinear2_lhs(rho2), 0};
  for (std::size_t f = 1; f < 4; ++f) {
    const double v = nonlinear2_lhs(bit_flip(rho2, f));
    if (v > best.value) best = {v, f};
  }
  return best;
}

double multipartite_witness_flipped(const DensityMatrix& rho, std::size_t flips) {
  require_qubits(rho, "multipartite witness");
  const std::size_t n = rho.num_subsystems();
  const std::size_t a = flip_mask(flips, n);
  const std::size_t b = a ^ all_ones(n);
  const double coh = std::abs(rho(a, b));
  const double rest = 1.0 - rho(a, a).real() - rho(b, b).real();
  return 4.0 * coh * coh - rest * rest;
}

double multipartite_witness_lhs(const DensityMatrix& rho, WitnessForm form) {
  if (form == WitnessForm::Density) return multipartite_witness_flipped(rho, 0);
  require_qubits(rho, "multipartite witness");
  const std::size_t n = rho.num_subsystems();
  const Complex i(0.0, 1.0);
  const CMatrix plus = i * pauli::X() + pauli::Y();
  const CMatrix minus = i * pauli::X() - pauli::Y();
  const CMatrix up = pauli::I() + pauli::Z();
  const CMatrix down = pauli::I() - pauli::Z();
  const Complex first = 4.0 * correlator_ops(rho, std::vector<CMatrix>(n, plus)) *
                        correlator_ops(rho, std::vector<CMatrix>(n, minus));
  const double scale = std::ldexp(1.0, static_cast<int>(n));  // 2^n
  const double second = scale - correlator_ops(rho, std::vector<CMatrix>(n, up)).real() -
                        correlator_ops(rho, std::vector<CMatrix>(n, down)).real();
  return (first.real() - second * second) / (scale * scale);
}

FramedValue multipartite_witness_bitflip_max(const DensityMatrix& rho) {
  require_qubits(rho, "multipartite witness");
  const std::size_t n = rho.num_subsystems();
  FramedValue best{multipartite_witness_flipped(rho, 0), 0};
  for (std::size_t f = 1; f < (std::size_t{1} << n); ++f) {
    const double v = multipartite_witness_flipped(rho, f);
    if (v > best.value) best = {v, f};
  }
  return best;
}

QuditReport qudit_witness_report(const DensityMatrix& rho) {
  const DimVector& dims = rho.dims();
  const std::size_t d = dims[0];
  if (!dims.all_equal(d)) throw InvalidInput("qudit witness: uniform local dimension required", "dims");
  const std::size_t n = dims.size();
  std::size_t repunit = 0;
  for (std::size_t i = 0; i < n; ++i) repunit = repunit * d + 1;
  QuditReport rep;
  rep.d = d;
  for (std::size_t u = 0; 2 * u + 1 < d; ++u) {
    const std::size_t v = d - 1 - u;
    QuditTerm term;
    term.u = u;
    const std::size_t iu = u * repunit, iv = v * repunit;
    const double coh = std::abs(rho(iu, iv));
    term.lhs = 4.0 * coh * coh;
    // Strings over {u, v}^n, one bit per site choosing v.
    for (std::size_t bits = 1; bits + 1 < (std::size_t{1} << n); ++bits) {
      std::size_t idx = 0;
      for (std::size_t s = 0; s < n; ++s) idx = idx * d + ((bits >> (n - 1 - s) & 1u) ? v : u);
      term.bound += rho(idx, idx).real();
    }
    term.value = term.lhs - term.bound * term.bound;
    rep.aggregate += 2.0 * coh - term.bound;
    rep.violated = rep.violated || term.value > tol::kWitness;
    rep.terms.push_back(term);
  }
  rep.violated = rep.violated || rep.aggregate > tol::kWitness;
  return rep;
}

double svetlichny_f(double delta, double theta) {
  const double s3 = std::sin(3.0 * theta), s1 = std::sin(theta);
  return 2.0 * delta * (s3 + s1) - s3 + 3.0 * s1;
}

SvetlichnyThreshold svetlichny_w_visibility(double alpha, double beta, double gamma, std::size_t grid) {
  if (std::abs(alpha * alpha + beta * beta + gamma * gamma - 1.0) > 1e-9)
    throw InvalidInput("svetlichny: (alpha, beta, gamma) must be normalized");
  SvetlichnyThreshold out;
  out.delta = alpha * beta + alpha * gamma + beta * gamma;
  const auto m = opt::grid_golden_max([&](double t) { return svetlichny_f(out.delta, t); }, 0.0, pi, grid, 1e-12);
  out.fmax = m.fx;
  out.theta = m.x;
  out.visibility = m.fx > 0.0 ? std::min(4.0 / m.fx, 1.0) : 1.0;
  return out;
}

void ProbTable::validate(double tolerance) const {
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      double s = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          if (p[a][b][x][y] < -tolerance) throw InvalidInput("probability table has a negative entry");
          s += p[a][b][x][y];
        }
      if (std::abs(s - 1.0) > tolerance)
        throw InvalidInput("probability table block (" + std::to_string(x) + "," + std::to_string(y) +
                           ") does not sum to 1");
    }
}

HardyReport hardy_check(const ProbTable& t, double tolerance) {
  t.validate();
  auto corr = [&](int x, int y) {
    return t.at(0, 0, x, y) - t.at(0, 1, x, y) - t.at(1, 0, x, y) + t.at(1, 1, x, y);
  };
  HardyReport rep;
  const double e[4] = {corr(1, 1), corr(1, 2), corr(2, 1), corr(2, 2)};
  double spread = *std::max_element(e, e + 4) - *std::min_element(e, e + 4);
  rep.preconditions.push_back({"correlator_equality", spread <= tolerance, spread});
  const double prod = t.at(0, 1, 0, 0) * t.at(1, 0, 0, 0);
  rep.preconditions.push_back({"product_zero", prod <= tolerance, prod});
  const double eq = std::abs(t.at(0, 0, 1, 1) - t.at(0, 0, 2, 2));
  rep.preconditions.push_back({"p00_equality", eq <= tolerance, eq});
  const double ord = t.at(1, 0, 1, 2) - t.at(1, 0, 1, 1);
  rep.preconditions.push_back({"p10_ordering", ord <= tolerance, ord});
  const double d11 = t.at(0, 1, 1, 1) - t.at(1, 0, 1, 1);
  const double d12 = t.at(0, 1, 1, 2) - t.at(1, 0, 1, 2);
  const double s00 = t.at(0, 0, 0, 0) + t.at(1, 1, 0, 0);
  const double q = d11 * d11 - d12 * d12 - s00 * s00;
  rep.quadratic = {"quadratic", q <= tolerance, q};
  rep.preconditions_hold =
      std::all_of(rep.preconditions.begin(), rep.preconditions.end(), [](const auto& c) { return c.holds; });
  rep.hardy_violation = rep.preconditions_hold && !rep.quadratic.holds;
  return rep;
}

ProbTable probability_table(const DensityMatrix& rho2, const std::array<Observable, 3>& alice,
                            const std::array<Observable, 3>& bob) {
  require_two_qubits(rho2, "probability table");
  ProbTable t;
  const CMatrix id = pauli::I();
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const CMatrix pa = 0.5 * (id + (a == 0 ? 1.0 : -1.0) * alice[x].matrix());
          const CMatrix pb = 0.5 * (id + (b == 0 ? 1.0 : -1.0) * bob[y].matrix());
          t.at(a, b, x, y) = std::max(0.0, correlator_ops(rho2, {pa, pb}).real());
        }
  return t;
}

std::array<Observable, 3> default_hardy_settings() { return {Observable::Z(), Observable::X(), Observable::Y()}; }

}  // namespace lossent
