#include "lossent/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "lossent/error.hpp"
#include "lossent/inequalities.hpp"
#include "lossent/optimize.hpp"
#include "lossent/states.hpp"

namespace lossent {

namespace {

constexpr double kProductTol = 1e-10;
constexpr double kSchmidtTol = 1e-10;
constexpr std::size_t kMaxFlipQubits = 6;
constexpr std::size_t kMaxOptimizeQubits = 6;
// Above this dimension extreme eigenpairs come from Lanczos instead of a dense solver.
constexpr std::size_t kDenseEigenLimit = 256;

std::vector<std::size_t> cut_order(const Bipartition& cut) {
  std::vector<std::size_t> order = cut.left;
  order.insert(order.end(), cut.right.begin(), cut.right.end());
  return order;
}

std::string flips_label(std::size_t flips, std::size_t n) {
  std::string s = "flip:";
  for (std::size_t i = 0; i < n; ++i) s += (flips >> i & 1u) ? '1' : '0';
  return s;
}

// Product across the cut: returns the two marginals, else nullopt.
std::optional<std::pair<CMatrix, CMatrix>> product_marginals(const DensityMatrix& rho, const Bipartition& cut) {
  const CMatrix perm = permute_subsystems(rho.mat(), rho.dims(), cut_order(cut));
  const DimVector pd = rho.dims().select(cut_order(cut));
  const std::size_t nl = cut.left.size();
  IndexSet left_idx(nl), right_idx(cut.right.size());
  std::iota(left_idx.begin(), left_idx.end(), 0);
  std::iota(right_idx.begin(), right_idx.end(), nl);
  const auto permuted = DensityMatrix::unchecked(perm, pd);
  CMatrix l = partial_trace(permuted, right_idx).mat();
  CMatrix r = partial_trace(permuted, left_idx).mat();
  if ((kron(l, r) - perm).cwiseAbs().maxCoeff() >= kProductTol) return std::nullopt;
  return std::make_pair(std::move(l), std::move(r));
}

bool is_product_across(const DensityMatrix& rho, const Bipartition& cut) {
  return product_marginals(rho, cut).has_value();
}

bool is_full_product(const DensityMatrix& rho) {
  const std::size_t n = rho.num_subsystems();
  CMatrix acc;
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix site = partial_trace(rho, complement({i}, n)).mat();
    acc = i == 0 ? site : kron(acc, site);
  }
  return (acc - rho.mat()).cwiseAbs().maxCoeff() < kProductTol;
}

double max_offdiag(const CMatrix& m) {
  double out = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != c) out = std::max(out, std::abs(m(r, c)));
  return out;
}

// u_site m u_site^dagger for a unitary acting on one subsystem.
CMatrix conjugate_site(const CMatrix& m, const DimVector& dims, std::size_t site, const CMatrix& u) {
  const auto d = static_cast<Eigen::Index>(dims[site]);
  Eigen::Index inner = 1;
  for (std::size_t i = site + 1; i < dims.size(); ++i) inner *= static_cast<Eigen::Index>(dims[i]);
  const Eigen::Index outer = m.rows() / (d * inner);
  auto left = [&](const CMatrix& x) {
    CMatrix y(x.rows(), x.cols());
    CMatrix block(d, x.cols());
    for (Eigen::Index a = 0; a < outer; ++a)
      for (Eigen::Index b = 0; b < inner; ++b) {
        for (Eigen::Index j = 0; j < d; ++j) block.row(j) = x.row((a * d + j) * inner + b);
        const CMatrix out = u * block;
        for (Eigen::Index j = 0; j < d; ++j) y.row((a * d + j) * inner + b) = out.row(j);
      }
    return y;
  };
  return left(CMatrix(left(m).adjoint())).adjoint();
}

bool diagonal_in_local_eigenbasis(const DensityMatrix& rho) {
  const std::size_t n = rho.num_subsystems();
  CMatrix m = rho.mat();
  for (std::size_t i = 0; i < n; ++i) {
    const CMatrix site = partial_trace(rho, complement({i}, n)).mat();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (site + site.adjoint()));
    m = conjugate_site(m, rho.dims(), i, es.eigenvectors().adjoint());
  }
  return max_offdiag(m) < kProductTol;
}

bool cut_is_exact(const DimVector& dims, const Bipartition& cut) {
  std::size_t a = dims.product(cut.left), b = dims.product(cut.right);
  if (a > b) std::swap(a, b);
  return a == 2 && (b == 2 || b == 3);
}

struct CutPpt {
  Bipartition cut;
  PptResult ppt;
};

std::vector<CutPpt> all_ppt(const DensityMatrix& rho, double npt_threshold) {
  std::vector<CutPpt> out;
  for (const auto& cut : all_bipartitions(rho.num_subsystems()))
    out.push_back({cut, ppt_verdict(rho, cut, npt_threshold)});
  return out;
}

bool pure_is_gme(const PureState& psi, std::string* separable_cut = nullptr) {
  for (const auto& cut : all_bipartitions(psi.num_subsystems())) {
    const Eigen::VectorXd s = schmidt_spectrum(psi, cut);
    if (s[0] >= 1.0 - kSchmidtTol) {
      if (separable_cut) *separable_cut = cut.to_string();
      return false;
    }
  }
  return true;
}

// Product-basis frame |a_i>, |a_i^perp> per qubit from two Bloch angles.
void frame_vectors(const std::vector<double>& x, std::size_t n, CVector& a, CVector& b) {
  a = CVector::Ones(1);
  b = CVector::Ones(1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = x[2 * i], p = x[2 * i + 1];
    const Complex e = std::polar(1.0, p);
    CVector ai(2), bi(2);
    ai << std::cos(t / 2), e * std::sin(t / 2);
    bi << -std::conj(e) * std::sin(t / 2), std::cos(t / 2);
    a = kron(a, ai);
    b = kron(b, bi);
  }
}

double framed_witness(const CMatrix& rho, const CVector& a, const CVector& b) {
  const CVector rb = rho * b;
  const Complex coh = a.dot(rb);
  const double paa = a.dot(rho * a).real();
  const double pbb = b.dot(rb).real();
  const double rest = 1.0 - paa - pbb;
  return 4.0 * std::norm(coh) - rest * rest;
}

FrameSearch frame_search(const DensityMatrix& rho, const WitnessOptions& opts, bool stop_on_fire) {
  const std::size_t n = rho.num_subsystems();
  FrameSearch best{multipartite_witness_flipped(rho, 0), "identity"};
  std::vector<std::pair<double, std::size_t>> flips;
  if (opts.bitflip_frames && n <= kMaxFlipQubits) {
    for (std::size_t f = 0; f < (std::size_t{1} << n); ++f) {
      const double v = multipartite_witness_flipped(rho, f);
      flips.emplace_back(v, f);
      if (v > best.value) best = {v, flips_label(f, n)};
    }
  }
  if (stop_on_fire && best.value > opts.witness_threshold) return best;

  for (std::size_t k = 0; k < opts.user_frames.size(); ++k) {
    const auto& frame = opts.user_frames[k];
    if (frame.size() != n) throw InvalidInput("user frame needs one unitary per qubit", "frames");
    CMatrix u = frame[0];
    for (std::size_t i = 1; i < n; ++i) u = kron(u, frame[i]);
    const auto rotated = DensityMatrix::unchecked(u * rho.mat() * u.adjoint(), rho.dims());
    const double v = multipartite_witness_flipped(rotated, 0);
    if (v > best.value) best = {v, "user:" + std::to_string(k)};
  }
  if (stop_on_fire && best.value > opts.witness_threshold) return best;

  if (opts.optimize_frames && n <= kMaxOptimizeQubits) {
    const CMatrix& m = rho.mat();
    auto objective = [&](const std::vector<double>& x) {
      CVector a, b;
      frame_vectors(x, n, a, b);
      return framed_witness(m, a, b);
    };
    std::vector<std::vector<double>> starts;
    std::sort(flips.begin(), flips.end(), [](const auto& l, const auto& r) {
      return l.first != r.first ? l.first > r.first : l.second < r.second;
    });
    for (std::size_t i = 0; i < std::min<std::size_t>(2, flips.size()); ++i) {
      std::vector<double> x(2 * n, 0.0);
      for (std::size_t q = 0; q < n; ++q) x[2 * q] = (flips[i].second >> q & 1u) ? std::numbers::pi : 0.0;
      starts.push_back(std::move(x));
    }
    if (starts.empty()) starts.emplace_back(2 * n, 0.0);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    for (std::size_t s = 0; s < opts.random_starts; ++s) {
      std::vector<double> x(2 * n);
      for (auto& v : x) v = ang(rng);
      starts.push_back(std::move(x));
    }
    for (const auto& x0 : starts) {
      const auto r = opt::simplex_max(objective, x0, 0.4, 4000, 1e-9);
      if (r.fx > best.value) best = {r.fx, "optimized"};
      if (stop_on_fire && best.value > opts.witness_threshold) break;
    }
  }
  return best;
}

Verdict bisep_impl(const DensityMatrix& rho, const WitnessOptions& opts, const std::vector<CutPpt>* ppts) {
  const std::size_t n = rho.num_subsystems();
  if (n < 2) throw InvalidInput("biseparability needs at least two subsystems");
  Verdict v;
  if (auto psi = as_pure(rho)) {
    std::string cut;
    if (!pure_is_gme(*psi, &cut)) {
      v.status = Status::Separable;
      v.evidence.push_back({"pure_product", cut, 1.0});
    } else {
      v.status = Status::Entangled;
      double gap = 1.0;
      for (const auto& c : all_bipartitions(n)) gap = std::min(gap, 1.0 - schmidt_spectrum(*psi, c)[0]);
      v.evidence.push_back({"pure_schmidt_gap", "", gap});
    }
    return v;
  }
  std::vector<CutPpt> local;
  if (!ppts) {
    local = all_ppt(rho, opts.npt_threshold);
    ppts = &local;
  }
  for (const auto& c : *ppts) v.evidence.push_back({"ppt_min_eig", c.cut.to_string(), c.ppt.min_eig});
  for (const auto& c : *ppts) {
    if (!c.ppt.npt && c.ppt.exact) {
      v.status = Status::Separable;
      v.evidence.push_back({"ppt_exact", c.cut.to_string(), c.ppt.min_eig});
      return v;
    }
  }
  for (const auto& c : *ppts) {
    if (!c.ppt.npt && is_product_across(rho, c.cut)) {
      v.status = Status::Separable;
      v.evidence.push_back({"product", c.cut.to_string(), 0.0});
      return v;
    }
  }
  if (n == 2) {
    if ((*ppts)[0].ppt.npt) v.status = Status::Entangled;
    return v;
  }
  if (rho.dims().all_equal(2)) {
    const FrameSearch fs = frame_search(rho, opts, true);
    v.evidence.push_back({"multipartite_witness", fs.frame, fs.value});
    if (fs.value > opts.witness_threshold) {
      v.status = Status::Entangled;
      return v;
    }
  }
  if (opts.fidelity_witness) {
    const double f = fidelity_witness(rho);
    v.evidence.push_back({"fidelity_witness", "", f});
    if (f > opts.witness_threshold) v.status = Status::Entangled;
  }
  return v;
}

Verdict fullsep_impl(const DensityMatrix& rho, double npt_threshold, std::vector<CutPpt>* ppts_out) {
  Verdict v;
  const std::size_t n = rho.num_subsystems();
  if (n == 1) {
    v.status = Status::Separable;
    v.evidence.push_back({"single_party", "", 0.0});
    return v;
  }
  const double off = rho.max_off_diagonal();
  if (off < tol::kOffDiagonal) {
    v.status = Status::Separable;
    v.evidence.push_back({"diagonal", "", off});
    return v;
  }
  if (is_full_product(rho)) {
    v.status = Status::Separable;
    v.evidence.push_back({"product", "", 0.0});
    return v;
  }
  if (diagonal_in_local_eigenbasis(rho)) {
    v.status = Status::Separable;
    v.evidence.push_back({"local_eigenbasis_diagonal", "", 0.0});
    return v;
  }
  std::vector<CutPpt> ppts = all_ppt(rho, npt_threshold);
  for (const auto& c : ppts) v.evidence.push_back({"ppt_min_eig", c.cut.to_string(), c.ppt.min_eig});
  const bool any_npt = std::any_of(ppts.begin(), ppts.end(), [](const CutPpt& c) { return c.ppt.npt; });
  if (any_npt) {
    v.status = Status::Entangled;
  } else if (n == 2 && ppts[0].ppt.exact) {
    v.status = Status::Separable;
    v.evidence.push_back({"ppt_exact", ppts[0].cut.to_string(), ppts[0].ppt.min_eig});
  }
  if (ppts_out) *ppts_out = std::move(ppts);
  return v;
}

bool counts_as_entangled(const Verdict& v) { return v.status == Status::Entangled; }

bool counts_as_separable(const Verdict& v) { return v.level == "fully_separable" || v.level == "biseparable"; }

Verdict classify_pure(const PureState& psi) {
  Verdict v;
  std::string cut;
  if (psi.num_subsystems() < 2) {
    v.status = Status::Separable;
    v.level = "fully_separable";
    return v;
  }
  if (pure_is_gme(psi, &cut)) {
    v.status = Status::Entangled;
    v.level = "gme";
    v.evidence.push_back({"pure_schmidt", "", 0.0});
  } else {
    v.status = Status::Separable;
    v.level = "biseparable";
    v.evidence.push_back({"pure_product", cut, 1.0});
  }
  return v;
}

Verdict classify_state(const StateRef& s, const WitnessOptions& opts) {
  if (const auto* psi = std::get_if<PureState>(&s)) return classify_pure(*psi);
  return classify_reduction(std::get<DensityMatrix>(s), opts);
}

DensityMatrix reduce(const StateRef& s, const LossSpec& spec, const Ownership& own) {
  if (const auto* psi = std::get_if<PureState>(&s)) return lose(*psi, spec, own).state;
  return lose(std::get<DensityMatrix>(s), spec, own).state;
}

const DimVector& state_dims(const StateRef& s) {
  if (const auto* psi = std::get_if<PureState>(&s)) return psi->dims();
  return std::get<DensityMatrix>(s).dims();
}

std::vector<SubsetReport> classify_sets(const StateRef& s, const Ownership& own, LossMode mode,
                                        const std::vector<IndexSet>& sets, const WitnessOptions& opts) {
  std::vector<SubsetReport> out(sets.size());
  const auto count = static_cast<std::ptrdiff_t>(sets.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto& lost = sets[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {lost, classify_reduction(reduce(s, {mode, lost}, own), opts)};
  }
  return out;
}

void combinations(std::size_t n, std::size_t k, std::size_t start, IndexSet& cur, std::vector<IndexSet>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i + (k - cur.size()) <= n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Separable:
      return "Separable";
    case Status::Entangled:
      return "Entangled";
    default:
      return "Unknown";
  }
}

PptResult ppt_verdict(const DensityMatrix& rho, const Bipartition& cut, double npt_threshold) {
  cut.validate(rho.num_subsystems());
  PptResult r;
  r.exact = cut_is_exact(rho.dims(), cut);
  const CMatrix pt = partial_transpose(rho, cut);
  if (rho.dim() > kDenseEigenLimit) {
    // A negative Ritz value is already a certificate.
    const RitzPair low = lanczos_extreme(pt, true);
    if (low.value < npt_threshold) {
      r.min_eig = low.value;
      r.npt = true;
      return r;
    }
    if (const auto lr = product_marginals(rho, cut)) {
      r.min_eig = min_eigenvalue(lr->first) * min_eigenvalue(lr->second);
      r.npt = r.min_eig < npt_threshold;
      return r;
    }
  }
  r.min_eig = min_eigenvalue(pt);
  r.npt = r.min_eig < npt_threshold;
  return r;
}

Eigen::VectorXd schmidt_spectrum(const PureState& psi, const Bipartition& cut) {
  cut.validate(psi.num_subsystems());
  const CVector v = permute_subsystems(psi.amps(), psi.dims(), cut_order(cut));
  const auto rows = static_cast<Eigen::Index>(psi.dims().product(cut.left));
  const auto cols = static_cast<Eigen::Index>(psi.dims().product(cut.right));
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v[r * cols + c];
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().array().square();
}

std::optional<PureState> as_pure(const DensityMatrix& rho, double tolerance) {
  // Frobenius norm squared equals the purity for Hermitian matrices.
  if (std::abs(rho.mat().squaredNorm() - 1.0) > tolerance) return std::nullopt;
  // A rank-one projector's largest-diagonal column is proportional to the state.
  Eigen::Index j = 0;
  rho.mat().diagonal().real().maxCoeff(&j);
  CVector col = rho.mat().col(j);
  return PureState::normalized(std::move(col), rho.dims());
}

Verdict biseparability_verdict(const DensityMatrix& rho, const WitnessOptions& opts) {
  return bisep_impl(rho, opts, nullptr);
}

Verdict fully_separable_proxy(const DensityMatrix& rho, double npt_threshold) {
  return fullsep_impl(rho, npt_threshold, nullptr);
}

FrameSearch multipartite_witness_frame_search(const DensityMatrix& rho, const WitnessOptions& opts) {
  if (!rho.dims().all_equal(2)) throw InvalidInput("frame search: qubit subsystems only", "dims");
  return frame_search(rho, opts, false);
}

double fidelity_witness(const DensityMatrix& rho) {
  if (rho.num_subsystems() < 2) throw InvalidInput("fidelity witness needs at least two subsystems");
  CVector top;
  double overlap = 0.0;
  if (rho.dim() > kDenseEigenLimit) {
    const RitzPair p = lanczos_extreme(rho.mat(), false);
    top = p.vector;
    overlap = p.value;
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho.mat() + rho.mat().adjoint()));
    const Eigen::Index last = es.eigenvalues().size() - 1;
    top = es.eigenvectors().col(last);
    overlap = es.eigenvalues()[last];
  }
  const PureState psi = PureState::normalized(std::move(top), rho.dims());
  double worst = 0.0;
  for (const auto& cut : all_bipartitions(rho.num_subsystems())) worst = std::max(worst, schmidt_spectrum(psi, cut)[0]);
  return overlap - worst;
}

Verdict classify_reduction(const DensityMatrix& rho, const WitnessOptions& opts) {
  std::vector<CutPpt> ppts;
  Verdict full = fullsep_impl(rho, opts.npt_threshold, &ppts);
  if (full.status == Status::Separable) {
    full.level = "fully_separable";
    return full;
  }
  if (rho.num_subsystems() < 2) return full;
  Verdict bis = bisep_impl(rho, opts, ppts.empty() ? nullptr : &ppts);
  if (bis.status == Status::Separable) {
    bis.level = "biseparable";
    return bis;
  }
  if (bis.status == Status::Entangled) {
    bis.level = "gme";
    return bis;
  }
  if (ppts.empty()) ppts = all_ppt(rho, opts.npt_threshold);
  const std::size_t npt = static_cast<std::size_t>(
      std::count_if(ppts.begin(), ppts.end(), [](const CutPpt& c) { return c.ppt.npt; }));
  if (npt == ppts.size()) {
    bis.status = Status::Entangled;
    bis.level = "npt_every_cut";
  } else {
    bis.status = Status::Unknown;
    bis.level = npt > 0 ? "npt_some_cut" : "unknown";
  }
  return bis;
}

std::vector<IndexSet> admissible_loss_sets(const Ownership& own, LossMode mode, std::size_t size) {
  const std::size_t universe = mode == LossMode::Party ? own.num_parties() : own.num_particles();
  std::vector<IndexSet> all;
  IndexSet cur;
  if (size == 0 || size > universe) return all;
  combinations(universe, size, 0, cur, all);
  std::vector<IndexSet> out;
  for (auto& s : all) {
    try {
      check_loss_spec({mode, s}, own);
      out.push_back(std::move(s));
    } catch (const InvalidInput&) {
    }
  }
  return out;
}

PlsResult particle_lose_separable(const StateRef& state, const Ownership& own, const WitnessOptions& opts) {
  own.check_against(state_dims(state));
  const std::size_t n = own.num_parties();
  if (n < 3) throw InvalidInput("particle-lose separability needs at least three parties");
  PlsResult res;
  bool all_entangled = true;
  for (std::size_t m = 1; m + 2 <= n; ++m) {
    auto reports = classify_sets(state, own, LossMode::Party, admissible_loss_sets(own, LossMode::Party, m), opts);
    for (auto& r : reports) {
      const bool sep = counts_as_separable(r.verdict);
      all_entangled = all_entangled && counts_as_entangled(r.verdict);
      if (sep && !res.witness_set) {
        res.witness_set = r.lost;
        res.granularity = r.verdict.level;
      }
      res.trace.push_back(std::move(r));
    }
    if (res.witness_set) {
      res.status = Status::Separable;
      return res;
    }
  }
  res.status = all_entangled ? Status::Entangled : Status::Unknown;
  return res;
}

DepthReport robustness_depth(const StateRef& state, const Ownership& own, const DepthOptions& opts) {
  own.check_against(state_dims(state));
  DepthReport rep;
  rep.mode = opts.mode;
  const Verdict base = classify_state(state, opts.witness);
  rep.trace.push_back({{}, base});
  rep.base_entangled = counts_as_entangled(base);
  if (!rep.base_entangled) {
    if (base.status == Status::Unknown) rep.unknown_at_size = 0;
    rep.first_failure = IndexSet{};
    return rep;
  }
  const std::size_t universe = opts.mode == LossMode::Party ? own.num_parties() : own.num_particles();
  const std::size_t admissible = universe >= 2 ? universe - 2 : 0;
  const std::size_t limit = opts.max_loss == 0 ? admissible : std::min(opts.max_loss, admissible);
  for (std::size_t m = 1; m <= limit; ++m) {
    const auto sets = admissible_loss_sets(own, opts.mode, m);
    if (sets.empty()) {
      rep.depth = m - 1;
      rep.exhausted = true;
      return rep;
    }
    auto reports = classify_sets(state, own, opts.mode, sets, opts.witness);
    bool failed = false, unknown = false;
    for (auto& r : reports) {
      if (!counts_as_entangled(r.verdict)) {
        if (!failed) rep.first_failure = r.lost;
        failed = true;
        unknown = unknown || r.verdict.status == Status::Unknown;
      }
      rep.trace.push_back(std::move(r));
    }
    if (failed) {
      rep.depth = m - 1;
      if (unknown) rep.unknown_at_size = m;
      return rep;
    }
  }
  rep.depth = limit;
  rep.exhausted = limit == admissible;
  rep.capped = !rep.exhausted;
  return rep;
}

Status ghz_characterization(const PureState& psi) {
  const std::size_t n = psi.num_subsystems();
  if (n < 3) throw InvalidInput("GHZ characterization needs at least three subsystems");
  if (!pure_is_gme(psi)) throw InvalidInput("GHZ characterization needs a genuinely multipartite entangled state");
  bool unknown = false;
  for (std::size_t j = 0; j < n; ++j) {
    const Verdict v = fully_separable_proxy(partial_trace(psi, {j}));
    if (v.status == Status::Entangled) return Status::Entangled;
    unknown = unknown || v.status == Status::Unknown;
  }
  return unknown ? Status::Unknown : Status::Separable;
}

DickeDecomposition symmetric_dicke_decompose(const PureState& psi, double tolerance) {
  const DimVector& dims = psi.dims();
  const std::size_t d = dims[0];
  const std::size_t n = dims.size();
  if (!dims.all_equal(d) || !is_permutation_symmetric(psi, tolerance))
    throw InvalidInput("state is not permutationally symmetric");
  std::size_t repunit = 0;
  for (std::size_t i = 0; i < n; ++i) repunit = repunit * d + 1;
  DickeDecomposition out;
  const CVector& a = psi.amps();
  double ghz2 = 0.0;
  for (std::size_t j = 0; j < d; ++j) ghz2 += std::norm(a[static_cast<Eigen::Index>(j * repunit)]);
  out.ghz_beta = std::sqrt(ghz2);
  out.ghz_alphas.assign(d, Complex(0.0));
  if (ghz2 > 0.0)
    for (std::size_t j = 0; j < d; ++j) out.ghz_alphas[j] = a[static_cast<Eigen::Index>(j * repunit)] / std::sqrt(ghz2);

  const std::size_t kmax = n * (d - 1);
  out.betas.assign(kmax + 1, Complex(0.0));
  CVector recon = CVector::Zero(a.size());
  for (std::size_t j = 0; j < d; ++j) recon[static_cast<Eigen::Index>(j * repunit)] = a[static_cast<Eigen::Index>(j * repunit)];
  for (std::size_t k = 0; k <= kmax; ++k) {
    std::vector<std::size_t> support;
    for (const auto& c : compositions(n, d, k)) {
      const bool constant = std::all_of(c.begin(), c.end(), [&](std::size_t x) { return x == c[0]; });
      if (!constant) support.push_back(dims.index_of(c));
    }
    if (support.empty()) continue;
    const double norm = std::sqrt(static_cast<double>(support.size()));
    Complex beta(0.0);
    for (std::size_t idx : support) beta += a[static_cast<Eigen::Index>(idx)];
    beta /= norm;
    out.betas[k] = beta;
    for (std::size_t idx : support) recon[static_cast<Eigen::Index>(idx)] += beta / norm;
  }
  out.residual = (a - recon).norm();
  return out;
}

}  // namespace lossent
