#include <doctest.h>

#include <random>

#include "lossent/channels.hpp"
#include "lossent/error.hpp"
#include "lossent/states.hpp"
#include "oracles.hpp"

using namespace lossent;

TEST_CASE("party loss on one-particle parties is a partial trace") {
  std::mt19937_64 rng(11);
  const DimVector d{2, 3, 2, 2};
  const CMatrix m = oracle::random_density(d.total(), 3, rng);
  const auto rho = DensityMatrix::unchecked(m, d);
  const Ownership own = Ownership::trivial(d);
  for (const IndexSet& s : {IndexSet{0}, IndexSet{1}, IndexSet{1, 3}, IndexSet{0, 2}}) {
    const LossResult r = lose(rho, {LossMode::Party, s}, own);
    CHECK((r.state.mat() - oracle::partial_trace(m, d.values(), s)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(r.ownership.num_parties() == 4 - s.size());
  }
}

TEST_CASE("Kraus form of the loss channel") {
  std::mt19937_64 rng(12);
  const DimVector d{2, 3, 2};
  const CMatrix m = oracle::random_density(d.total(), 2, rng);
  for (const IndexSet& s : {IndexSet{}, IndexSet{1}, IndexSet{0, 2}}) {
    const auto ops = kraus_of_loss(d, s);
    CMatrix sum = CMatrix::Zero(static_cast<Eigen::Index>(d.total()), static_cast<Eigen::Index>(d.total()));
    for (const auto& k : ops) sum += k.adjoint() * k;
    CHECK((sum - CMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() < 1e-14);
    const CMatrix out = apply_kraus(ops, m);
    const CMatrix expect = s.empty() ? m : oracle::partial_trace(m, d.values(), s);
    CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("loss bounds") {
  const PureState w = dicke({4, 2, 1, std::nullopt});
  const Ownership own = Ownership::trivial(w.dims());
  CHECK_NOTHROW(lose(w, {LossMode::Party, {0, 1}}, own));
  CHECK_THROWS_AS(lose(w, {LossMode::Party, {0, 1, 2}}, own), InvalidInput);
  CHECK_THROWS_AS(lose(w, {LossMode::Party, {4}}, own), InvalidInput);
  CHECK_THROWS_AS(lose(w, {LossMode::Party, {1, 1}}, own), InvalidInput);

  // Two parties with two particles each: particle loss may take up to N-2 = 2
  // particles, but must leave particles at two parties.
  const Ownership pairs({"A", "B"}, {{2, 2}, {2, 2}});
  const PureState g(ghz_theta(4, 0.5).amps(), DimVector{4, 4});
  CHECK_NOTHROW(lose(g, {LossMode::Particle, {0, 2}}, pairs));
  CHECK_THROWS_AS(lose(g, {LossMode::Particle, {0, 1}}, pairs), InvalidInput);
  CHECK_THROWS_AS(lose(g, {LossMode::Particle, {0, 1, 2}}, pairs), InvalidInput);
}

TEST_CASE("party loss equals losing the party's particles") {
  std::mt19937_64 rng(13);
  const Ownership own({"A", "B", "C"}, {{2, 2}, {2}, {3, 2}});
  const DimVector pd = own.party_dims();
  CHECK(pd == DimVector{4, 2, 6});
  const CMatrix m = oracle::random_density(pd.total(), 4, rng);
  const auto rho = DensityMatrix::unchecked(m, pd);
  const LossResult a = lose(rho, {LossMode::Party, {2}}, own);
  const LossResult b = lose(rho, {LossMode::Particle, own.particles_of(2)}, own);
  CHECK((a.state.mat() - b.state.mat()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(a.state.dims() == DimVector{4, 2});
  CHECK(b.surviving_parties == IndexSet{0, 1});

  // Losing one of A's particles leaves A with a single qubit.
  const LossResult c = lose(rho, {LossMode::Particle, {1}}, own);
  CHECK(c.state.dims() == DimVector{2, 2, 6});
  CHECK((c.state.mat() - oracle::partial_trace(m, {2, 2, 2, 3, 2}, {1})).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("successive losses compose") {
  std::mt19937_64 rng(14);
  const DimVector d{2, 2, 2, 2, 2};
  const auto rho = DensityMatrix::unchecked(oracle::random_density(d.total(), 2, rng), d);
  const Ownership own = Ownership::trivial(d);
  const LossResult once = lose(rho, {LossMode::Party, {1, 3}}, own);
  const LossResult first = lose(rho, {LossMode::Party, {1}}, own);
  const LossResult second = lose(first.state, {LossMode::Party, {2}}, first.ownership);
  CHECK((once.state.mat() - second.state.mat()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(second.ownership.names() == once.ownership.names());
}

TEST_CASE("ownership checks") {
  CHECK_THROWS_AS(Ownership({"A", "A"}, {{2}, {2}}), InvalidInput);
  CHECK_THROWS_AS(Ownership({"A", "B"}, {{2}, {}}), InvalidInput);
  const Ownership own({"A", "B"}, {{2}, {2, 3}});
  CHECK_THROWS_AS(own.check_against(DimVector{2, 2}), InvalidInput);
  CHECK_NOTHROW(own.check_against(DimVector{2, 6}));
  CHECK(own.party_index("B") == 1);
  CHECK_THROWS_AS(own.party_index("C"), InvalidInput);
  CHECK(own.party_of(2) == 1);
}
