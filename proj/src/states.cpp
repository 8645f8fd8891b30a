#include "lossent/states.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "lossent/error.hpp"

namespace lossent {

namespace {

constexpr double kParamNorm = 1e-9;

void check_unit(double norm2, const char* what) {
  if (std::abs(norm2 - 1.0) > kParamNorm)
    throw InvalidInput(std::string(what) + ": squared amplitudes sum to " + std::to_string(norm2) +
                       ", expected 1");
}

DimVector uniform_dims(std::size_t n, std::size_t d) { return DimVector(std::vector<std::size_t>(n, d)); }

}  // namespace

PureState ghz(const GhzParams& p) {
  if (p.n < 2) throw InvalidInput("ghz: need n >= 2", "n");
  if (p.d < 2) throw InvalidInput("ghz: need d >= 2", "d");
  if (p.amplitudes.size() != p.d)
    throw InvalidInput("ghz: expected " + std::to_string(p.d) + " amplitudes", "amplitudes");
  double norm2 = 0.0;
  for (double a : p.amplitudes) norm2 += a * a;
  check_unit(norm2, "ghz");
  const DimVector dims = uniform_dims(p.n, p.d);
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(dims.total()));
  // |j...j> sits at j * (1 + d + d^2 + ...).
  std::size_t repunit = 0;
  for (std::size_t i = 0; i < p.n; ++i) repunit = repunit * p.d + 1;
  for (std::size_t j = 0; j < p.d; ++j) amps[static_cast<Eigen::Index>(j * repunit)] = p.amplitudes[j];
  return PureState::normalized(std::move(amps), dims);
}

PureState ghz_theta(std::size_t n, double theta) {
  return ghz({n, 2, {std::cos(theta), std::sin(theta)}});
}

std::vector<Composition> compositions(std::size_t n, std::size_t d, std::size_t k) {
  std::vector<Composition> out;
  Composition cur(n, 0);
  // Depth-first over digits, most significant first, so output is in basis order.
  auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos == n) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    const std::size_t tail_cap = (n - pos - 1) * (d - 1);
    for (std::size_t v = 0; v < d && v <= remaining; ++v) {
      if (remaining - v > tail_cap) continue;
      cur[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, k);
  return out;
}

unsigned long long composition_count(std::size_t n, std::size_t d, std::size_t k) {
  // ways[s] = number of strings of the current length with digit sum s.
  std::vector<unsigned long long> ways(k + 1, 0);
  ways[0] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<unsigned long long> next(k + 1, 0);
    for (std::size_t s = 0; s <= k; ++s)
      for (std::size_t v = 0; v < d && v <= s; ++v) next[s] += ways[s - v];
    ways = std::move(next);
  }
  return ways[k];
}

PureState dicke(const DickeParams& p) {
  if (p.n < 2) throw InvalidInput("dicke: need n >= 2", "n");
  if (p.d < 2) throw InvalidInput("dicke: need d >= 2", "d");
  if (p.k < 1 || p.k > p.n * (p.d - 1))
    throw InvalidInput("dicke: k = " + std::to_string(p.k) + " outside [1, " +
                           std::to_string(p.n * (p.d - 1)) + "]",
                       "k");
  const DimVector dims = uniform_dims(p.n, p.d);
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(dims.total()));
  const auto comps = compositions(p.n, p.d, p.k);
  if (!p.coeffs) {
    const double a = 1.0 / std::sqrt(static_cast<double>(composition_count(p.n, p.d, p.k)));
    for (const auto& c : comps) amps[static_cast<Eigen::Index>(dims.index_of(c))] = a;
    return PureState::normalized(std::move(amps), dims);
  }
  for (const auto& [digits, value] : *p.coeffs) {
    if (digits.size() != p.n) throw InvalidInput("dicke: coefficient label has wrong length", "coeffs");
    std::size_t sum = 0;
    for (std::size_t v : digits) {
      if (v >= p.d) throw InvalidInput("dicke: digit out of range in coefficient label", "coeffs");
      sum += v;
    }
    if (sum != p.k) throw InvalidInput("dicke: coefficient label does not sum to k", "coeffs");
    if (value == 0.0) throw InvalidInput("dicke: zero coefficient supplied", "coeffs");
  }
  for (const auto& c : comps) {
    auto it = p.coeffs->find(c);
    if (it == p.coeffs->end())
      throw InvalidInput("dicke: missing coefficient for " + basis_label(c, dims), "coeffs");
    amps[static_cast<Eigen::Index>(dims.index_of(c))] = it->second;
  }
  return PureState::normalized(std::move(amps), dims);
}

PureState dicke_superposition(const std::vector<double>& betas, const std::vector<DickeParams>& parts) {
  if (betas.size() != parts.size() || parts.empty())
    throw InvalidInput("dicke superposition: need one beta per part", "betas");
  double norm2 = 0.0;
  for (double b : betas) norm2 += b * b;
  check_unit(norm2, "dicke superposition");
  std::set<std::size_t> ks;
  for (const auto& part : parts) {
    if (part.n != parts[0].n || part.d != parts[0].d)
      throw InvalidInput("dicke superposition: parts must share n and d", "parts");
    if (!ks.insert(part.k).second)
      throw InvalidInput("dicke superposition: duplicate k = " + std::to_string(part.k), "parts");
  }
  const DimVector dims = uniform_dims(parts[0].n, parts[0].d);
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(dims.total()));
  for (std::size_t i = 0; i < parts.size(); ++i) amps += betas[i] * dicke(parts[i]).amps();
  return PureState::normalized(std::move(amps), dims);
}

PureState w_state(double alpha, double beta, double gamma) {
  check_unit(alpha * alpha + beta * beta + gamma * gamma, "w");
  CVector amps = CVector::Zero(8);
  amps[1] = alpha;
  amps[2] = beta;
  amps[4] = gamma;
  return PureState::normalized(std::move(amps), DimVector{2, 2, 2});
}

PureState w_state_angles(double theta, double phi) {
  return w_state(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

PureState bipartite_pure(const std::vector<double>& schmidt, bool require_entangled) {
  const std::size_t d = schmidt.size();
  if (d < 2) throw InvalidInput("bipartite: need at least two Schmidt coefficients", "schmidt");
  double norm2 = 0.0;
  std::size_t nonzero = 0;
  for (double s : schmidt) {
    norm2 += s * s;
    if (s != 0.0) ++nonzero;
  }
  check_unit(norm2, "bipartite");
  if (require_entangled && nonzero < 2)
    throw InvalidInput("bipartite: an entangled source needs at least two nonzero Schmidt coefficients",
                       "schmidt");
  const DimVector dims{d, d};
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t j = 0; j < d; ++j) amps[static_cast<Eigen::Index>(j * d + j)] = schmidt[j];
  return PureState::normalized(std::move(amps), dims);
}

DensityMatrix noisy_mix(const PureState& psi, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("noisy: v must lie in [0, 1]", "v");
  const auto n = static_cast<Eigen::Index>(psi.dim());
  CMatrix m = v * (psi.amps() * psi.amps().adjoint());
  m.diagonal().array() += (1.0 - v) / static_cast<double>(n);
  return DensityMatrix::unchecked(std::move(m), psi.dims());
}

std::vector<std::size_t> parse_basis_label(const std::string& label, const DimVector& dims) {
  std::vector<std::size_t> digits;
  const bool comma = label.find(',') != std::string::npos;
  if (comma) {
    std::size_t start = 0;
    while (start <= label.size()) {
      const std::size_t end = std::min(label.find(',', start), label.size());
      const std::string tok = label.substr(start, end - start);
      if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidInput("malformed basis label '" + label + "'", "amplitudes");
      digits.push_back(std::stoul(tok));
      start = end + 1;
    }
  } else {
    for (char ch : label) {
      if (ch < '0' || ch > '9') throw InvalidInput("malformed basis label '" + label + "'", "amplitudes");
      digits.push_back(static_cast<std::size_t>(ch - '0'));
    }
  }
  if (digits.size() != dims.size())
    throw InvalidInput("basis label '" + label + "' has " + std::to_string(digits.size()) +
                           " digits, expected " + std::to_string(dims.size()),
                       "amplitudes");
  for (std::size_t i = 0; i < digits.size(); ++i)
    if (digits[i] >= dims[i])
      throw InvalidInput("basis label '" + label + "': digit " + std::to_string(digits[i]) +
                             " out of range for subsystem " + std::to_string(i),
                         "amplitudes");
  return digits;
}

std::string basis_label(const std::vector<std::size_t>& digits, const DimVector& dims) {
  const bool wide = std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d > 10; });
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (wide && i) out += ',';
    out += std::to_string(digits[i]);
  }
  return out;
}

PureState from_amplitudes(const DimVector& dims,
                          const std::vector<std::pair<std::vector<std::size_t>, Complex>>& amps) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dims.total()));
  std::set<std::size_t> seen;
  for (const auto& [digits, a] : amps) {
    const std::size_t idx = dims.index_of(digits);
    if (!seen.insert(idx).second)
      throw InvalidInput("basis label " + basis_label(digits, dims) + " given twice", "amplitudes");
    v[static_cast<Eigen::Index>(idx)] = a;
  }
  const double norm2 = v.squaredNorm();
  if (std::abs(norm2 - 1.0) > kParamNorm)
    throw InvalidInput("literal amplitudes are not normalized (norm^2 = " + std::to_string(norm2) + ")",
                       "amplitudes");
  return PureState::normalized(std::move(v), dims);
}

PureState from_amplitudes(const DimVector& dims, const std::map<std::string, Complex>& amps) {
  std::vector<std::pair<std::vector<std::size_t>, Complex>> parsed;
  for (const auto& [label, a] : amps) parsed.emplace_back(parse_basis_label(label, dims), a);
  return from_amplitudes(dims, parsed);
}

std::map<std::string, Complex> to_amplitude_map(const PureState& psi, double cutoff) {
  std::map<std::string, Complex> out;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const Complex a = psi.amps()[static_cast<Eigen::Index>(i)];
    if (std::abs(a) > cutoff) out[basis_label(psi.dims().digits(i), psi.dims())] = a;
  }
  return out;
}

bool is_permutation_symmetric(const PureState& psi, double tolerance) {
  const DimVector& dims = psi.dims();
  const std::size_t n = dims.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (dims[i] != dims[i + 1]) return false;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::swap(order[i], order[i + 1]);
    const CVector swapped = permute_subsystems(psi.amps(), dims, order);
    if ((swapped - psi.amps()).cwiseAbs().maxCoeff() > tolerance) return false;
  }
  return true;
}

}  // namespace lossent
