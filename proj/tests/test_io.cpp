#include <doctest.h>

#include <numbers>
#include <random>
#include <sstream>

#include "lossent/error.hpp"
#include "lossent/spec_json.hpp"
#include "lossent/state_io.hpp"
#include "lossent/states.hpp"
#include "oracles.hpp"

using namespace lossent;

namespace {

StateFile round_trip(const StateFile& f, Encoding enc) {
  std::stringstream ss;
  write_state(ss, f, enc);
  return read_state(ss);
}

std::string data(const std::string& name) { return std::string(LOSSENT_TEST_DATA) + "/" + name; }

}  // namespace

TEST_CASE("binary state files are bit exact") {
  std::mt19937_64 rng(41);
  const DimVector d{2, 3};
  const PureState psi(oracle::random_pure(6, rng), d);
  const StateFile back = round_trip({psi, std::nullopt}, Encoding::Binary);
  REQUIRE(std::holds_alternative<PureState>(back.state));
  CHECK(std::get<PureState>(back.state).amps() == psi.amps());
  CHECK_FALSE(back.ownership);

  const auto rho = DensityMatrix::unchecked(oracle::random_density(6, 2, rng), d);
  const Ownership own({"A", "B"}, {{2}, {3}});
  const StateFile b2 = round_trip({rho, own}, Encoding::Binary);
  REQUIRE(std::holds_alternative<DensityMatrix>(b2.state));
  CHECK(std::get<DensityMatrix>(b2.state).mat() == rho.mat());
  REQUIRE(b2.ownership);
  CHECK(b2.ownership->names() == own.names());
}

TEST_CASE("text state files round trip to full precision") {
  std::mt19937_64 rng(42);
  const PureState psi(oracle::random_pure(8, rng), DimVector{2, 2, 2});
  const StateFile back = round_trip({psi, std::nullopt}, Encoding::Text);
  CHECK(std::get<PureState>(back.state).amps() == psi.amps());
  CHECK(ownership_or_trivial(back).names() == std::vector<std::string>{"A1", "A2", "A3"});
}

TEST_CASE("malformed state files are rejected") {
  std::stringstream empty;
  CHECK_THROWS_AS(read_state(empty), InvalidInput);
  std::stringstream header("{\"format\":\"lossent-state\",\"version\":1,\"kind\":\"pure\",\"dims\":[2,2],\"encoding\":\"text\"}\n1,0\n");
  CHECK_THROWS_AS(read_state(header), InvalidInput);
}

TEST_CASE("state specs") {
  const StateRef w = parse_state_spec(parse_json_file(data("w3.json")));
  CHECK(dims_of(w).total() == 8);
  const auto ghz = parse_state_spec(json{{"family", "ghz"}, {"n", 4}, {"theta", 0.3}});
  CHECK(std::abs(std::get<PureState>(ghz).amplitude({1, 1, 1, 1}).real() - std::sin(0.3)) < 1e-15);
  const auto lit = parse_state_spec(
      json{{"family", "literal"}, {"dims", {2, 2}}, {"amplitudes", {{"01", 0.6}, {"10", json::array({0.0, 0.8})}}}});
  CHECK(std::abs(std::get<PureState>(lit).amplitude({1, 0}) - Complex(0, 0.8)) < 1e-15);
  const auto noisy =
      parse_state_spec(json{{"family", "noisy"}, {"v", 0.5}, {"state", {{"family", "epr"}}}});
  CHECK(std::get<DensityMatrix>(noisy)(0, 3).real() == doctest::Approx(0.25));
  const auto mixture = parse_state_spec(json{
      {"family", "mixture"},
      {"components",
       {{{"weight", 0.5}, {"state", {{"family", "ghz"}, {"n", 2}, {"theta", 0.0}}}},
        {{"weight", 0.5}, {"state", {{"family", "ghz"}, {"n", 2}, {"theta", std::numbers::pi / 2}}}}}}});
  CHECK(to_density(mixture).purity() == doctest::Approx(0.5));
  const auto dk = parse_state_spec(json{{"family", "dicke"},
                                        {"n", 3},
                                        {"d", 2},
                                        {"k", 1},
                                        {"coeffs", {{{"digits", "001"}, {"amp", 1.0}},
                                                    {{"digits", "010"}, {"amp", 1.0}},
                                                    {{"digits", "100"}, {"amp", 2.0}}}}});
  CHECK(std::get<PureState>(dk).amplitude({1, 0, 0}).real() == doctest::Approx(2 / std::sqrt(6.0)));
}

TEST_CASE("state spec errors name the field") {
  auto field_of = [](const json& j) {
    try {
      parse_state_spec(j);
    } catch (const InvalidInput& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of(json{{"family", "nope"}}) == "family");
  CHECK(field_of(json{{"n", 3}}) == "family");
  CHECK(field_of(json{{"family", "ghz"}, {"n", 3}}) != "<none>");
  CHECK(field_of(json{{"family", "noisy"}, {"v", 2.0}, {"state", {{"family", "epr"}}}}) != "<none>");
}

TEST_CASE("JSON syntax errors carry line and column") {
  try {
    parse_json_file(data("bad_syntax.json"));
    FAIL("expected a syntax error");
  } catch (const InvalidInput& e) {
    const std::string what = e.what();
    CHECK(what.find("bad_syntax.json:3:") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_json_file(data("missing.json")), InvalidInput);
}

TEST_CASE("network specs") {
  const json tri = parse_json_file(data("triangle.json"));
  CHECK(is_network_spec(tri));
  CHECK_FALSE(is_network_spec(parse_json_file(data("w3.json"))));
  const NetworkSpec net = parse_network_spec(tri);
  CHECK(net.parties.size() == 3);
  CHECK(net.sources.size() == 3);
  CHECK(net.sources[0].assignment[1].slot == std::optional<std::size_t>(1));
  try {
    parse_network_spec(parse_json_file(data("bad_assignment.json")));
    FAIL("expected an assignment error");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("particle 1") != std::string::npos);
    CHECK(e.field() == "sources[1].assignment.1");
  }
}

TEST_CASE("report serialization") {
  const PureState g = ghz_theta(3, 0.4);
  const Ownership own = Ownership::trivial(g.dims());
  const json pls = to_json(particle_lose_separable(g, own), own);
  CHECK(pls["verdict"] == "particle_lose_separable");
  CHECK(pls["witness_set"] == "{A1}");
  const json depth = to_json(robustness_depth(g, own), own);
  CHECK(depth["depth"] == 0);
  CHECK(loss_set_label({0, 2}, Ownership({"A", "B"}, {{2, 2}, {2}}), LossMode::Particle) == "{A[0],B[0]}");
}
