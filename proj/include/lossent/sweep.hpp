#pragma once

// Parameter sweeps producing figure data. Rows come out in grid order
// (theta outer, phi inner) whatever the thread schedule, so repeated runs
// are byte-identical.
//
// Families and columns:
//   w_nonlinear            theta, phi, value_A1, value_A2, value_A3, flag
//   chsh_planes            plane, theta, phi, value_A1, value_A2, value_A3, flag
//   svetlichny_visibility  theta, phi, v_svetlichny, v_A1, v_A2, v_A3
//   ghz_family             n, theta, witness_density, witness_literal,
//                          reductions_separable, particle_lose_separable
//   dicke_family           n, d, k, loss_sets, npt_every_cut, worst_min_eig
// theta and phi run over [0, pi/2] with both endpoints. For ghz_family the
// phi axis counts system sizes n = 3..6; dicke_family ignores the grid.

#include <cstddef>
#include <string>

namespace lossent {

enum class SweepFormat { Csv, Json };

struct SweepConfig {
  std::string family;
  std::size_t theta_steps = 50;
  std::size_t phi_steps = 50;
  SweepFormat format = SweepFormat::Csv;
  /// Grid resolution of the 1-D maximizations (Svetlichny threshold).
  std::size_t resolution = 2048;
  /// Per-pair angle grid of the CHSH plane search.
  std::size_t chsh_grid = 48;
  bool parallel = true;

  void validate() const;
};

std::string run_sweep(const SweepConfig& cfg);

}  // namespace lossent
