#include "lossent/channels.hpp"

#include <algorithm>
#include <numeric>

#include "lossent/error.hpp"

namespace lossent {

const char* to_string(LossMode m) { return m == LossMode::Party ? "party" : "particle"; }

Ownership::Ownership(std::vector<std::string> names, std::vector<std::vector<std::size_t>> particle_dims)
    : names_(std::move(names)), particle_dims_(std::move(particle_dims)) {
  if (names_.size() != particle_dims_.size())
    throw InvalidInput("ownership: one particle list per party required", "parties");
  for (std::size_t p = 0; p < names_.size(); ++p) {
    if (std::find(names_.begin(), names_.begin() + static_cast<std::ptrdiff_t>(p), names_[p]) !=
        names_.begin() + static_cast<std::ptrdiff_t>(p))
      throw InvalidInput("duplicate party name '" + names_[p] + "'", "parties");
    if (particle_dims_[p].empty())
      throw InvalidInput("party " + names_[p] + " owns no particles", "parties");
    for (std::size_t d : particle_dims_[p]) {
      if (d < 2) throw InvalidInput("particle dimension below 2 for party " + names_[p], "dims");
      party_of_.push_back(p);
    }
  }
}

Ownership Ownership::trivial(const DimVector& dims) {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> pd;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    names.push_back("A" + std::to_string(i + 1));
    pd.push_back({dims[i]});
  }
  return Ownership(std::move(names), std::move(pd));
}

DimVector Ownership::party_dims() const {
  std::vector<std::size_t> out;
  for (const auto& ps : particle_dims_)
    out.push_back(std::accumulate(ps.begin(), ps.end(), std::size_t{1}, std::multiplies<>()));
  return DimVector(std::move(out));
}

DimVector Ownership::flat_particle_dims() const {
  std::vector<std::size_t> out;
  for (const auto& ps : particle_dims_) out.insert(out.end(), ps.begin(), ps.end());
  return DimVector(std::move(out));
}

IndexSet Ownership::particles_of(std::size_t party) const {
  IndexSet out;
  for (std::size_t i = 0; i < party_of_.size(); ++i)
    if (party_of_[i] == party) out.push_back(i);
  return out;
}

std::size_t Ownership::party_index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InvalidInput("unknown party '" + name + "'", "party");
  return static_cast<std::size_t>(it - names_.begin());
}

void Ownership::check_against(const DimVector& dims) const {
  if (!(party_dims() == dims))
    throw InvalidInput("ownership party dims " + party_dims().to_string() + " do not match state dims " +
                       dims.to_string());
}

IndexSet lost_particles(const LossSpec& spec, const Ownership& own) {
  if (spec.mode == LossMode::Particle)
    return normalize_index_set(spec.lost, own.num_particles(), "particle loss");
  IndexSet parties = normalize_index_set(spec.lost, own.num_parties(), "party loss");
  IndexSet out;
  for (std::size_t p : parties) {
    const IndexSet ps = own.particles_of(p);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_loss_spec(const LossSpec& spec, const Ownership& own) {
  const std::size_t n = own.num_parties();
  if (spec.mode == LossMode::Party) {
    const IndexSet s = normalize_index_set(spec.lost, n, "party loss");
    if (n < 2 || s.size() + 2 > n)
      throw InvalidInput("party-level loss may remove at most n-2 = " +
                             std::to_string(n >= 2 ? n - 2 : 0) + " of " + std::to_string(n) +
                             " parties (got " + std::to_string(s.size()) + ")",
                         "lost");
    return;
  }
  const std::size_t total = own.num_particles();
  const IndexSet s = normalize_index_set(spec.lost, total, "particle loss");
  if (total < 2 || s.size() + 2 > total)
    throw InvalidInput("particle-level loss may remove at most N-2 = " +
                           std::to_string(total >= 2 ? total - 2 : 0) + " particles (got " +
                           std::to_string(s.size()) + ")",
                       "lost");
  std::vector<bool> alive(n, false);
  for (std::size_t i = 0; i < total; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) alive[own.party_of(i)] = true;
  if (std::count(alive.begin(), alive.end(), true) < 2)
    throw InvalidInput("particle-level loss must leave particles of at least two parties", "lost");
}

namespace {

struct Survivors {
  Ownership own;
  IndexSet parties;
  IndexSet particles;
};

Survivors survivors_of(const Ownership& own, const IndexSet& lost) {
  Survivors s;
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> pd;
  std::size_t global = 0;
  for (std::size_t p = 0; p < own.num_parties(); ++p) {
    std::vector<std::size_t> kept;
    for (std::size_t d : own.particle_dims()[p]) {
      if (!std::binary_search(lost.begin(), lost.end(), global)) {
        kept.push_back(d);
        s.particles.push_back(global);
      }
      ++global;
    }
    if (!kept.empty()) {
      names.push_back(own.names()[p]);
      pd.push_back(std::move(kept));
      s.parties.push_back(p);
    }
  }
  s.own = Ownership(std::move(names), std::move(pd));
  return s;
}

}  // namespace

LossResult lose(const DensityMatrix& rho, const LossSpec& spec, const Ownership& own) {
  own.check_against(rho.dims());
  check_loss_spec(spec, own);
  const IndexSet lost = lost_particles(spec, own);
  const auto flat = DensityMatrix::unchecked(rho.mat(), own.flat_particle_dims());
  DensityMatrix reduced = partial_trace(flat, lost);
  Survivors s = survivors_of(own, lost);
  return {DensityMatrix::unchecked(reduced.mat(), s.own.party_dims()), std::move(s.own),
          std::move(s.parties), std::move(s.particles)};
}

LossResult lose(const PureState& psi, const LossSpec& spec, const Ownership& own) {
  own.check_against(psi.dims());
  check_loss_spec(spec, own);
  const IndexSet lost = lost_particles(spec, own);
  const PureState flat(psi.amps(), own.flat_particle_dims());
  DensityMatrix reduced = partial_trace(flat, lost);
  Survivors s = survivors_of(own, lost);
  return {DensityMatrix::unchecked(reduced.mat(), s.own.party_dims()), std::move(s.own),
          std::move(s.parties), std::move(s.particles)};
}

std::vector<CMatrix> kraus_of_loss(const DimVector& dims, const IndexSet& lost_in) {
  const IndexSet lost = normalize_index_set(lost_in, dims.size(), "kraus");
  if (lost.size() == dims.size()) throw InvalidInput("loss set must be a strict subset");
  const IndexSet kept = complement(lost, dims.size());
  const auto nd = static_cast<Eigen::Index>(dims.total());
  if (lost.empty()) return {CMatrix::Identity(nd, nd)};
  const DimVector lost_dims = dims.select(lost);
  const DimVector kept_dims = dims.select(kept);
  std::vector<CMatrix> ops;
  for (std::size_t j = 0; j < lost_dims.total(); ++j) {
    const auto jd = lost_dims.digits(j);
    CMatrix e = CMatrix::Zero(static_cast<Eigen::Index>(kept_dims.total()), nd);
    for (std::size_t r = 0; r < kept_dims.total(); ++r) {
      const auto rd = kept_dims.digits(r);
      std::vector<std::size_t> full(dims.size());
      for (std::size_t i = 0; i < kept.size(); ++i) full[kept[i]] = rd[i];
      for (std::size_t i = 0; i < lost.size(); ++i) full[lost[i]] = jd[i];
      e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(dims.index_of(full))) = 1.0;
    }
    ops.push_back(std::move(e));
  }
  return ops;
}

CMatrix apply_kraus(const std::vector<CMatrix>& ops, const CMatrix& rho) {
  if (ops.empty()) throw InvalidInput("empty Kraus family");
  CMatrix out = CMatrix::Zero(ops[0].rows(), ops[0].rows());
  for (const auto& e : ops) out += e * rho * e.adjoint();
  return out;
}

}  // namespace lossent
