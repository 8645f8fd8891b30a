#pragma once

// Particle-loss channels. A state's subsystems are parties; each party holds
// one or more physical particles stored contiguously, so a party's local
// dimension is the product of its particle dimensions.

#include <string>
#include <vector>

#include "lossent/tensor.hpp"

namespace lossent {

enum class LossMode { Party, Particle };

const char* to_string(LossMode m);

struct LossSpec {
  LossMode mode = LossMode::Party;
  IndexSet lost;  // party indices or global particle indices
};

class Ownership {
public:
  Ownership() = default;
  Ownership(std::vector<std::string> names, std::vector<std::vector<std::size_t>> particle_dims);

  /// One party per subsystem, named A1..An, each holding one particle.
  static Ownership trivial(const DimVector& dims);

  std::size_t num_parties() const noexcept { return names_.size(); }
  std::size_t num_particles() const noexcept { return party_of_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<std::vector<std::size_t>>& particle_dims() const noexcept { return particle_dims_; }

  DimVector party_dims() const;
  DimVector flat_particle_dims() const;
  /// Global indices of the particles held by `party`.
  IndexSet particles_of(std::size_t party) const;
  std::size_t party_of(std::size_t particle) const { return party_of_.at(particle); }
  std::size_t party_index(const std::string& name) const;

  /// Throws unless party dims match `dims`.
  void check_against(const DimVector& dims) const;

private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> particle_dims_;
  std::vector<std::size_t> party_of_;
};

struct LossResult {
  DensityMatrix state;       // party-level dims over surviving parties
  Ownership ownership;       // surviving parties and their surviving particles
  IndexSet surviving_parties;    // original party indices, ascending
  IndexSet surviving_particles;  // original particle indices, ascending
};

/// Lost particle set implied by a spec (party mode expands each party).
IndexSet lost_particles(const LossSpec& spec, const Ownership& own);

/// Throws InvalidInput if the loss set violates the admissible size bounds.
void check_loss_spec(const LossSpec& spec, const Ownership& own);

LossResult lose(const DensityMatrix& rho, const LossSpec& spec, const Ownership& own);
LossResult lose(const PureState& psi, const LossSpec& spec, const Ownership& own);

/// Kraus operators <j|_lost (x) 1_rest enumerated over the lost product basis.
std::vector<CMatrix> kraus_of_loss(const DimVector& dims, const IndexSet& lost);
CMatrix apply_kraus(const std::vector<CMatrix>& ops, const CMatrix& rho);

}  // namespace lossent
