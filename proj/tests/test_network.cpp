#include <doctest.h>

#include <cmath>

#include "lossent/error.hpp"
#include "lossent/network.hpp"
#include "lossent/states.hpp"
#include "oracles.hpp"

using namespace lossent;

namespace {

PureState epr() { return bipartite_pure({std::sqrt(0.5), std::sqrt(0.5)}); }

Source pair_source(std::size_t a, std::size_t b) { return {epr(), {{a, std::nullopt}, {b, std::nullopt}}, "epr"}; }

NetworkSpec pair_network(std::size_t n, const std::vector<oracle::Edge>& edges) {
  NetworkSpec net;
  for (std::size_t i = 0; i < n; ++i) net.parties.push_back("A" + std::to_string(i + 1));
  for (auto [a, b] : edges) net.sources.push_back(pair_source(a, b));
  return net;
}

}  // namespace

TEST_CASE("edge-disjoint paths agree with path packing on small graphs") {
  const auto graphs = oracle::connected_graphs(5, 7);
  CHECK(graphs.size() == 1 + 2 + 6 + 17);
  for (const auto& [n, edges] : graphs) {
    const ShareGraph g = ShareGraph::from_edges(n, edges);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = s + 1; t < n; ++t)
        CHECK(edge_disjoint_paths(g, s, t) == oracle::brute_edge_disjoint_paths(n, edges, s, t));
  }
}

TEST_CASE("edge multiplicities act as capacities") {
  ShareGraph g(3);
  g.add_edge(0, 1, 2);
  g.add_edge(1, 2);
  CHECK(edge_disjoint_paths(g, 0, 1) == 2);
  CHECK(edge_disjoint_paths(g, 0, 2) == 1);
  CHECK(g.degree(1) == 2);
  CHECK(g.min_degree() == 1);
  CHECK_THROWS(edge_disjoint_paths(g, 1, 1));
}

TEST_CASE("independence number agrees with subset enumeration") {
  for (const auto& [n, edges] : oracle::connected_graphs(6, 8)) {
    const Independence ind = k_independence(ShareGraph::from_edges(n, edges));
    CHECK(ind.k == oracle::brute_independence(n, edges));
    CHECK(ind.parties.size() == ind.k);
    for (auto [a, b] : edges) CHECK_FALSE((oracle::contains(ind.parties, a) && oracle::contains(ind.parties, b)));
  }
}

TEST_CASE("share graph of a network") {
  NetworkSpec net = pair_network(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const ShareGraph g = ShareGraph::of(net);
  CHECK(g.is_connected());
  CHECK_FALSE(g.is_complete());
  CHECK(min_degree(net) == 2);
  CHECK_FALSE(is_completely_connected(net));
  const NetworkReport r = classify_network(net);
  CHECK(r.k_independence == 2);
  CHECK(r.particle_lose_separable);
  CHECK(r.predicted_depth == std::optional<std::size_t>(1));
  CHECK(r.witnessing_loss_set.size() == 2);
  CHECK(g.induced({0, 2}).is_connected() == false);

  NetworkSpec tri = pair_network(3, {{0, 1}, {1, 2}, {2, 0}});
  const NetworkReport t = classify_network(tri);
  CHECK(t.completely_connected);
  CHECK(t.robust);
  CHECK_FALSE(t.particle_lose_separable);
  CHECK(t.k_independence == 1);
}

TEST_CASE("network validation") {
  NetworkSpec net = pair_network(3, {{0, 1}, {1, 2}});
  CHECK_NOTHROW(net.validate());
  CHECK(net.all_bipartite());
  CHECK(net.num_particles() == 4);

  NetworkSpec missing = net;
  missing.sources[0].assignment.pop_back();
  CHECK_THROWS_AS(missing.validate(), InvalidInput);

  NetworkSpec unknown = net;
  unknown.sources[0].assignment[1].party = 7;
  CHECK_THROWS_AS(unknown.validate(), InvalidInput);

  NetworkSpec empty = net;
  empty.parties.push_back("A4");
  CHECK_THROWS_AS(empty.validate(), InvalidInput);

  NetworkSpec clash = net;
  clash.sources[0].assignment[1].slot = 0;
  clash.sources[1].assignment[0].slot = 0;
  CHECK_THROWS_AS(build_state(clash), InvalidInput);

  NetworkSpec product = net;
  product.sources[0].state = bipartite_pure({1.0, 0.0}, false);
  CHECK_THROWS_AS(product.validate(), InvalidInput);
}

TEST_CASE("assembled states are normalized and grouped by party") {
  const NetworkSpec net = pair_network(3, {{0, 1}, {1, 2}});
  const NetworkState s = build_state(net);
  CHECK(s.state.dims() == DimVector{2, 4, 2});
  CHECK(s.state.amps().norm() == doctest::Approx(1.0));
  CHECK(s.order == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(s.source_of == std::vector<std::size_t>{0, 0, 1, 1});
  CHECK(s.ownership.particle_dims()[1] == std::vector<std::size_t>{2, 2});
  CHECK_THROWS_AS(build_state(net, 8), CapacityExceeded);
}

TEST_CASE("explicit slots reorder a party's particles") {
  NetworkSpec net = pair_network(3, {{0, 1}, {1, 2}});
  net.sources[0].assignment[1].slot = 1;
  net.sources[1].assignment[0].slot = 0;
  const NetworkState s = build_state(net);
  CHECK(s.order == std::vector<std::size_t>{0, 2, 1, 3});
  // A2's first qubit now pairs with A3: terms |a>|c a>|c>.
  CHECK(std::abs(s.state.amplitude({0, 2, 1}) - Complex(0.5)) < 1e-15);
  CHECK(std::abs(s.state.amplitude({1, 1, 0}) - Complex(0.5)) < 1e-15);
  CHECK(std::abs(s.state.amplitude({0, 1, 0})) == 0.0);
}

TEST_CASE("surviving-source connectivity") {
  const NetworkSpec net = pair_network(3, {{0, 1}, {1, 2}, {2, 0}});
  const NetworkState s = build_state(net);
  CHECK(source_graph_connected(net, s, {}));
  // Losing one particle of A1 breaks one source; the remaining path still links all parties.
  CHECK(source_graph_connected(net, s, {0}));
  // Grouped particles: A1 {s0, s2}, A2 {s0, s1}, A3 {s1, s2}; losing 0 and 3 isolates A2.
  CHECK_FALSE(source_graph_connected(net, s, {0, 3}));
}

TEST_CASE("crosscheck on small pair networks") {
  for (const auto& edges : std::vector<std::vector<oracle::Edge>>{{{0, 1}, {1, 2}}, {{0, 1}, {1, 2}, {2, 0}}}) {
    const NetworkSpec net = pair_network(3, edges);
    for (LossMode mode : {LossMode::Party, LossMode::Particle}) {
      const Crosscheck c = depth_crosscheck(net, mode);
      CHECK(c.agrees);
      CHECK(c.depth.depth == min_degree(net) - 1);
      for (const auto& row : c.connectivity) CHECK(row.consistent);
    }
  }
}
