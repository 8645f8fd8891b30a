#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lossent/error.hpp"
#include "lossent/inequalities.hpp"
#include "lossent/states.hpp"
#include "oracles.hpp"

using namespace lossent;

namespace {

DensityMatrix dm(const CMatrix& m, const std::vector<std::size_t>& d) { return DensityMatrix::unchecked(m, DimVector(d)); }

const PureState& epr() {
  static const PureState e = bipartite_pure({std::sqrt(0.5), std::sqrt(0.5)});
  return e;
}

ProbTable to_table(const oracle::Table& t) {
  ProbTable p;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) p.at(a, b, x, y) = t.p[a][b][x][y];
  return p;
}

}  // namespace

TEST_CASE("observables") {
  CHECK_THROWS_AS(Observable(Eigen::Vector3d(1, 1, 0)), InvalidInput);
  const CMatrix y = Observable::Y().matrix();
  CHECK((y - pauli::Y()).cwiseAbs().maxCoeff() == 0.0);
  const Observable o = plane_observable(Plane::XZ, 0.3);
  CHECK(o.bloch().y() == 0.0);
  CHECK(o.bloch().norm() == doctest::Approx(1.0));
}

TEST_CASE("EPR correlators") {
  const DensityMatrix r = epr().projector();
  CHECK(correlator(r, {Observable::X(), Observable::X()}) == doctest::Approx(1.0));
  CHECK(correlator(r, {Observable::Y(), Observable::Y()}) == doctest::Approx(-1.0));
  CHECK(correlator(r, {Observable::Z(), std::nullopt}) == doctest::Approx(0.0).epsilon(1e-15));
  const Eigen::Matrix3d t = correlation_matrix(r);
  CHECK(t.diagonal().sum() == doctest::Approx(1.0));
  CHECK(nonlinear2_lhs(r) == doctest::Approx(4.0));
  CHECK(nonlinear2_density_lhs(r) == doctest::Approx(1.0));
}

TEST_CASE("CHSH plane maxima agree with the correlation-block oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const CMatrix m = oracle::random_density(4, 1 + trial % 3, rng);
    const DensityMatrix r = dm(m, {2, 2});
    const ChshMax xy = chsh_plane_max(r, Plane::XY, 24);
    const ChshMax xz = chsh_plane_max(r, Plane::XZ, 24);
    CHECK(xy.value == doctest::Approx(oracle::chsh_plane_optimum(m, {0, 1})).epsilon(1e-8));
    CHECK(xz.value == doctest::Approx(oracle::chsh_plane_optimum(m, {0, 2})).epsilon(1e-8));
    const auto& a = xy.angles;
    CHECK(chsh_value(r, plane_observable(Plane::XY, a[0]), plane_observable(Plane::XY, a[1]),
                     plane_observable(Plane::XY, a[2]), plane_observable(Plane::XY, a[3])) ==
          doctest::Approx(xy.value).epsilon(1e-10));
  }
  CHECK(chsh_plane_max(epr().projector(), Plane::XZ).value == doctest::Approx(2 * std::numbers::sqrt2));
}

TEST_CASE("CHSH closed form on the W reduction") {
  for (double t : {0.2, 0.7, 1.1})
    for (double p : {0.3, 0.9}) {
      const double alpha = std::sin(t) * std::cos(p), beta = std::sin(t) * std::sin(p), gamma = std::cos(t);
      const DensityMatrix r = partial_trace(w_state(alpha, beta, gamma), {2});
      const double q = std::numbers::pi / 4;
      const double v = chsh_value(r, Observable::X(), Observable::Y(), plane_observable(Plane::XY, q),
                                  plane_observable(Plane::XY, -q));
      CHECK(std::abs(v - 4 * std::numbers::sqrt2 * beta * gamma) < 1e-12);
    }
}

TEST_CASE("nonlinear witness identity and soundness") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix r = dm(oracle::random_density(4, 1 + trial % 4, rng), {2, 2});
    CHECK(std::abs(nonlinear2_lhs(r) - 4 * nonlinear2_density_lhs(r)) < 1e-12);
    const DensityMatrix s = dm(oracle::random_separable({2, 2}, 1 + trial % 4, rng), {2, 2});
    CHECK(nonlinear2_bitflip_max(s).value <= 1e-9);
  }
}

TEST_CASE("bit flips permute the basis") {
  const DensityMatrix r = epr().projector();
  const DensityMatrix f = bit_flip(r, 1);
  CHECK(f(1, 2).real() == doctest::Approx(0.5));
  CHECK(f(0, 0).real() == doctest::Approx(0.0));
  const DensityMatrix w = partial_trace(dicke({3, 2, 1, std::nullopt}), {0});
  const FramedValue fv = nonlinear2_bitflip_max(w);
  CHECK(fv.value == doctest::Approx(4.0 / 3.0));
  CHECK((fv.flips == 1 || fv.flips == 2));
}

TEST_CASE("multipartite witness forms") {
  for (std::size_t n = 3; n <= 5; ++n) {
    const DensityMatrix g = ghz_theta(n, std::numbers::pi / 4).projector();
    CHECK(multipartite_witness_lhs(g) == doctest::Approx(1.0));
    const double literal = multipartite_witness_lhs(g, WitnessForm::PauliLiteral);
    if (n % 2 == 1)
      CHECK(literal < 0.0);
    else
      CHECK(literal > 0.0);
  }
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::size_t> d{2, 2, 2};
    const DensityMatrix b = dm(oracle::random_biseparable(d, 1 + trial % 3, rng), d);
    CHECK(multipartite_witness_bitflip_max(b).value <= 1e-9);
  }
  const DensityMatrix g = ghz_theta(3, 0.3).projector();
  CHECK(multipartite_witness_flipped(bit_flip(g, 5), 5) == doctest::Approx(multipartite_witness_lhs(g)));
}

TEST_CASE("qudit witness") {
  const PureState q = ghz({3, 3, {1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)}});
  const QuditReport r = qudit_witness_report(q.projector());
  CHECK(r.d == 3);
  REQUIRE(r.terms.size() == 1);
  CHECK(r.terms[0].lhs == doctest::Approx(4.0 / 9.0));
  CHECK(r.terms[0].bound == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r.violated);
  const DensityMatrix mm = DensityMatrix::maximally_mixed(DimVector{3, 3, 3});
  CHECK_FALSE(qudit_witness_report(mm).violated);
}

TEST_CASE("Svetlichny visibility") {
  const double a = 1 / std::sqrt(3.0);
  const SvetlichnyThreshold s = svetlichny_w_visibility(a, a, a);
  CHECK(s.delta == doctest::Approx(1.0));
  const auto [scan_v, scan_t] = oracle::svetlichny_scan(s.delta, 200000);
  CHECK(std::abs(s.visibility - scan_v) < 1e-8);
  CHECK(std::abs(s.theta - scan_t) < 1e-4);
  CHECK(s.visibility == doctest::Approx(0.918).epsilon(1e-3));
  // Product-like weights never violate.
  CHECK(svetlichny_w_visibility(1.0, 0.0, 0.0).visibility == 1.0);
  CHECK(svetlichny_f(0.5, 0.0) == 0.0);
}

TEST_CASE("Hardy constraints hold for every local deterministic strategy") {
  std::size_t with_pre = 0;
  for (const auto& t : oracle::all_deterministic_tables()) {
    const HardyReport r = hardy_check(to_table(t));
    CHECK_FALSE(r.hardy_violation);
    with_pre += r.preconditions_hold;
  }
  CHECK(with_pre == 16);
  std::mt19937_64 rng(34);
  const auto tables = oracle::all_deterministic_tables();
  for (int trial = 0; trial < 200; ++trial) {
    const auto w = oracle::random_weights(4, rng);
    oracle::Table mixed;
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& t = tables[std::uniform_int_distribution<std::size_t>(0, 63)(rng)];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) mixed.p[a][b][x][y] += w[k] * t.p[a][b][x][y];
    }
    CHECK_FALSE(hardy_check(to_table(mixed)).hardy_violation);
  }
}

TEST_CASE("probability tables from states") {
  const ProbTable t = probability_table(epr().projector(), default_hardy_settings(), default_hardy_settings());
  CHECK_NOTHROW(t.validate());
  CHECK(t.at(0, 0, 0, 0) == doctest::Approx(0.5));
  CHECK(t.at(0, 1, 0, 0) == doctest::Approx(0.0));
  ProbTable bad;
  bad.at(0, 0, 0, 0) = 2.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK_THROWS_AS(hardy_check(bad), InvalidInput);
}
