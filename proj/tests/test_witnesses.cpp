#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lossent/error.hpp"
#include "lossent/states.hpp"
#include "lossent/witnesses.hpp"
#include "oracles.hpp"

using namespace lossent;

namespace {

DensityMatrix dm(const CMatrix& m, const std::vector<std::size_t>& d) { return DensityMatrix::unchecked(m, DimVector(d)); }

}  // namespace

TEST_CASE("PPT on two qubits") {
  const PureState e = bipartite_pure({std::sqrt(0.5), std::sqrt(0.5)});
  const PptResult r = ppt_verdict(e.projector(), {{0}, {1}});
  CHECK(r.npt);
  CHECK(r.exact);
  CHECK(r.min_eig == doctest::Approx(-0.5));
  // Werner family: NPT exactly above visibility 1/3.
  CHECK(ppt_verdict(noisy_mix(e, 0.34), {{0}, {1}}).npt);
  CHECK_FALSE(ppt_verdict(noisy_mix(e, 0.32), {{0}, {1}}).npt);
}

TEST_CASE("separable mixtures are never NPT") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::vector<std::size_t> d{2, 3, 2};
    const auto rho = dm(oracle::random_separable(d, 1 + trial % 5, rng), d);
    for (const auto& cut : all_bipartitions(3)) CHECK_FALSE(ppt_verdict(rho, cut).npt);
    CHECK(fully_separable_proxy(rho).status != Status::Entangled);
  }
}

TEST_CASE("PPT above the dense limit matches the dense spectrum") {
  std::mt19937_64 rng(22);
  const std::vector<std::size_t> d{2, 2, 2, 2, 2, 2, 2, 2, 2};
  const PureState g = ghz_theta(9, 0.4);
  const DensityMatrix noisy = noisy_mix(g, 0.3);
  const DensityMatrix sep = dm(oracle::random_separable(d, 3, rng), d);
  for (const Bipartition& cut : {Bipartition{{0}, {1, 2, 3, 4, 5, 6, 7, 8}}, Bipartition{{0, 3, 5}, {1, 2, 4, 6, 7, 8}}}) {
    for (const DensityMatrix* rho : {&noisy, &sep}) {
      const double exact = oracle::min_eig(oracle::partial_transpose(rho->mat(), d, cut.left));
      const PptResult r = ppt_verdict(*rho, cut);
      CHECK(r.npt == (exact < tol::kNpt));
      CHECK(r.min_eig >= exact - 1e-12);
      if (r.npt) CHECK(r.min_eig == doctest::Approx(exact).epsilon(1e-8));
    }
  }
}

TEST_CASE("fully separable proxy") {
  CMatrix diag = CMatrix::Zero(8, 8);
  diag(0, 0) = 0.5;
  diag(7, 7) = 0.5;
  const Verdict v = fully_separable_proxy(dm(diag, {2, 2, 2}));
  CHECK(v.status == Status::Separable);
  const PureState w = dicke({3, 2, 1, std::nullopt});
  CHECK(fully_separable_proxy(w.projector()).status == Status::Entangled);
}

TEST_CASE("biseparability verdicts are sound on sampled biseparable states") {
  std::mt19937_64 rng(23);
  WitnessOptions opts;
  opts.random_starts = 2;
  for (int trial = 0; trial < 60; ++trial) {
    const std::vector<std::size_t> d{2, 2, 2};
    const auto rho = dm(oracle::random_biseparable(d, 1 + trial % 4, rng), d);
    CHECK(biseparability_verdict(rho, opts).status != Status::Entangled);
    CHECK(fidelity_witness(rho) <= 1e-9);
  }
}

TEST_CASE("GME detection") {
  const DensityMatrix g = ghz_theta(3, std::numbers::pi / 4).projector();
  const Verdict v = biseparability_verdict(g);
  CHECK(v.status == Status::Entangled);
  CHECK(fidelity_witness(g) == doctest::Approx(0.5));
  const DensityMatrix w = dicke({3, 2, 1, std::nullopt}).projector();
  CHECK(biseparability_verdict(w).status == Status::Entangled);
  CHECK(fidelity_witness(w) == doctest::Approx(1.0 / 3.0));
  // Product across A1 | A2 A3.
  const PureState epr = bipartite_pure({std::sqrt(0.5), std::sqrt(0.5)});
  CVector prod(8);
  for (Eigen::Index i = 0; i < 8; ++i) prod[i] = (i < 4 ? 1.0 : 0.0) * epr.amps()[i % 4];
  const PureState p(prod, DimVector{2, 2, 2});
  CHECK(biseparability_verdict(p.projector()).status == Status::Separable);
}

TEST_CASE("reduction classification levels") {
  const PureState w = dicke({4, 2, 1, std::nullopt});
  const Verdict one = classify_reduction(partial_trace(w, {0}));
  CHECK(one.status == Status::Entangled);
  const PureState g = ghz_theta(4, 0.6);
  const Verdict r = classify_reduction(partial_trace(g, {2}));
  CHECK(r.status == Status::Separable);
  CHECK(r.level == "fully_separable");
}

TEST_CASE("particle-lose separability") {
  const PureState g = ghz_theta(3, std::numbers::pi / 8);
  const PlsResult a = particle_lose_separable(g, Ownership::trivial(g.dims()));
  CHECK(a.status == Status::Separable);
  CHECK(a.witness_set == std::optional<IndexSet>(IndexSet{0}));
  CHECK(a.granularity == "fully_separable");
  const PureState w = dicke({3, 2, 1, std::nullopt});
  const PlsResult b = particle_lose_separable(w, Ownership::trivial(w.dims()));
  CHECK(b.status == Status::Entangled);
  CHECK_FALSE(b.witness_set);
  CHECK(b.trace.size() == 3);
}

TEST_CASE("robustness depth") {
  const PureState w = dicke({3, 2, 1, std::nullopt});
  const DepthReport r = robustness_depth(w, Ownership::trivial(w.dims()));
  CHECK(r.base_entangled);
  CHECK(r.depth == 1);
  CHECK(r.exhausted);
  const PureState d42 = dicke({4, 2, 2, std::nullopt});
  CHECK(robustness_depth(d42, Ownership::trivial(d42.dims())).depth == 2);
  const PureState g = ghz_theta(4, 0.5);
  const DepthReport gr = robustness_depth(g, Ownership::trivial(g.dims()));
  CHECK(gr.depth == 0);
  CHECK(gr.first_failure == std::optional<IndexSet>(IndexSet{0}));
  DepthOptions capped;
  capped.max_loss = 1;
  const DepthReport c = robustness_depth(d42, Ownership::trivial(d42.dims()), capped);
  CHECK(c.depth == 1);
  CHECK(c.capped);
}

TEST_CASE("admissible loss sets") {
  const Ownership four = Ownership::trivial(DimVector{2, 2, 2, 2});
  CHECK(admissible_loss_sets(four, LossMode::Party, 1).size() == 4);
  CHECK(admissible_loss_sets(four, LossMode::Party, 2).size() == 6);
  CHECK(admissible_loss_sets(four, LossMode::Party, 3).empty());
  const Ownership pairs({"A", "B"}, {{2, 2}, {2, 2}});
  // Two of four particles, excluding both particles of one party.
  CHECK(admissible_loss_sets(pairs, LossMode::Particle, 2).size() == 4);
  CHECK(admissible_loss_sets(pairs, LossMode::Particle, 1).front() == IndexSet{0});
}

TEST_CASE("GHZ characterization") {
  for (std::size_t n = 3; n <= 5; ++n) CHECK(ghz_characterization(ghz_theta(n, 0.3)) == Status::Separable);
  CHECK(ghz_characterization(ghz({3, 3, {0.6, 0.0, 0.8}})) == Status::Separable);
  CHECK(ghz_characterization(dicke({3, 2, 1, std::nullopt})) == Status::Entangled);
  CHECK_THROWS_AS(ghz_characterization(bipartite_pure({0.6, 0.8})), InvalidInput);
  CVector prod = CVector::Zero(8);
  prod[0] = 1.0;
  CHECK_THROWS_AS(ghz_characterization(PureState(prod, DimVector{2, 2, 2})), InvalidInput);
}

TEST_CASE("symmetric Dicke decomposition") {
  const PureState s = dicke_superposition({0.6, 0.8}, {{3, 2, 1, std::nullopt}, {3, 2, 2, std::nullopt}});
  const DickeDecomposition dd = symmetric_dicke_decompose(s);
  CHECK(std::abs(dd.betas[1] - Complex(0.6)) < 1e-12);
  CHECK(std::abs(dd.betas[2] - Complex(0.8)) < 1e-12);
  CHECK(std::abs(dd.ghz_beta) < 1e-12);
  CHECK(dd.residual < 1e-12);
  const DickeDecomposition gd = symmetric_dicke_decompose(ghz_theta(3, 0.3));
  CHECK(std::abs(gd.ghz_beta - Complex(1.0)) < 1e-12);
  CHECK_THROWS_AS(symmetric_dicke_decompose(w_state(0.6, 0.8, 0.0)), InvalidInput);
}

TEST_CASE("purity detection") {
  const PureState w = dicke({3, 2, 1, std::nullopt});
  const auto back = as_pure(w.projector());
  REQUIRE(back);
  CHECK(std::abs(std::abs(back->amps().dot(w.amps())) - 1.0) < 1e-12);
  CHECK_FALSE(as_pure(noisy_mix(w, 0.9)));
}

TEST_CASE("Schmidt spectrum") {
  const PureState g = ghz_theta(3, std::numbers::pi / 6);
  const Eigen::VectorXd s = schmidt_spectrum(g, {{0}, {1, 2}});
  CHECK(s[0] == doctest::Approx(0.75));
  CHECK(s[1] == doctest::Approx(0.25));
}
