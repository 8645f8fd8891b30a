#include "lossent/network.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>

#include "lossent/error.hpp"
#include "lossent/witnesses.hpp"

namespace lossent {

namespace {

IndexSet parties_of_source(const Source& s) {
  std::set<std::size_t> ps;
  for (const auto& a : s.assignment) ps.insert(a.party);
  return IndexSet(ps.begin(), ps.end());
}

bool connected_on(const std::vector<std::vector<bool>>& adj, const std::vector<bool>& alive) {
  const std::size_t n = adj.size();
  std::size_t start = n, count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) {
      ++count;
      if (start == n) start = i;
    }
  if (count <= 1) return true;
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v = 0; v < n; ++v)
      if (alive[v] && !seen[v] && adj[u][v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
  }
  return reached == count;
}

}  // namespace

// ------------------------------------------------------------- NetworkSpec

std::size_t NetworkSpec::num_particles() const {
  std::size_t n = 0;
  for (const auto& s : sources) n += s.state.num_subsystems();
  return n;
}

bool NetworkSpec::all_bipartite() const {
  return std::all_of(sources.begin(), sources.end(), [](const Source& s) { return s.state.num_subsystems() == 2; });
}

void NetworkSpec::validate() const {
  if (parties.empty()) throw InvalidInput("network has no parties", "parties");
  std::set<std::string> names(parties.begin(), parties.end());
  if (names.size() != parties.size()) throw InvalidInput("duplicate party name", "parties");
  std::vector<std::size_t> owned(parties.size(), 0);
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const Source& s = sources[si];
    const std::string where = "sources[" + std::to_string(si) + "]";
    if (s.assignment.size() != s.state.num_subsystems()) {
      for (std::size_t p = s.assignment.size(); p < s.state.num_subsystems(); ++p)
        throw InvalidInput(where + ": particle " + std::to_string(p) + " is not assigned to a party",
                           where + ".assignment");
      throw InvalidInput(where + ": assignment lists more particles than the source has", where + ".assignment");
    }
    for (const auto& a : s.assignment) {
      if (a.party >= parties.size()) throw InvalidInput(where + ": unknown party index", where + ".assignment");
      ++owned[a.party];
    }
    if (s.state.num_subsystems() == 2) {
      const Eigen::VectorXd sch = schmidt_spectrum(s.state, Bipartition{{0}, {1}});
      if (sch[0] >= 1.0 - 1e-12)
        throw InvalidInput(where + ": two-particle source is not entangled", where + ".state");
    }
  }
  for (std::size_t p = 0; p < parties.size(); ++p)
    if (owned[p] == 0) throw InvalidInput("party " + parties[p] + " owns no particles", "parties");
}

// ------------------------------------------------------------- build_state

NetworkState build_state(const NetworkSpec& net, std::size_t max_dim) {
  net.validate();
  std::vector<std::size_t> raw_dims;
  std::vector<std::size_t> raw_source;
  std::vector<std::vector<std::pair<std::size_t, std::optional<std::size_t>>>> per_party(net.parties.size());
  std::size_t total = 1;
  for (std::size_t si = 0; si < net.sources.size(); ++si) {
    const Source& s = net.sources[si];
    for (std::size_t p = 0; p < s.state.num_subsystems(); ++p) {
      per_party[s.assignment[p].party].emplace_back(raw_dims.size(), s.assignment[p].slot);
      raw_dims.push_back(s.state.dims()[p]);
      raw_source.push_back(si);
      total *= s.state.dims()[p];
      if (total > max_dim)
        throw CapacityExceeded("network state dimension exceeds the cap of " + std::to_string(max_dim));
    }
  }

  std::vector<std::size_t> order, source_of;
  std::vector<std::vector<std::size_t>> particle_dims(net.parties.size());
  for (std::size_t p = 0; p < net.parties.size(); ++p) {
    auto& items = per_party[p];
    const std::size_t k = items.size();
    std::vector<std::optional<std::size_t>> slots(k);
    for (const auto& [raw, slot] : items) {
      if (!slot) continue;
      if (*slot >= k || slots[*slot])
        throw InvalidInput("party " + net.parties[p] + ": slot " + std::to_string(*slot) + " is invalid or taken",
                           "assignment");
      slots[*slot] = raw;
    }
    std::size_t next = 0;
    for (const auto& [raw, slot] : items) {
      if (slot) continue;
      while (slots[next]) ++next;
      slots[next] = raw;
    }
    for (const auto& s : slots) {
      order.push_back(*s);
      source_of.push_back(raw_source[*s]);
      particle_dims[p].push_back(raw_dims[*s]);
    }
  }

  CVector raw = CVector::Ones(1);
  for (const auto& s : net.sources) raw = kron(raw, s.state.amps());
  Ownership own(net.parties, particle_dims);
  PureState grouped = PureState::normalized(permute_subsystems(raw, DimVector(raw_dims), order), own.party_dims());
  return {std::move(grouped), std::move(own), std::move(order), std::move(source_of)};
}

// --------------------------------------------------------------- ShareGraph

ShareGraph::ShareGraph(std::size_t n) : mult_(n, std::vector<std::size_t>(n, 0)) {}

void ShareGraph::add_edge(std::size_t i, std::size_t j, std::size_t count) {
  if (i == j) throw InvalidInput("share graph has no self-loops");
  mult_.at(i).at(j) += count;
  mult_.at(j).at(i) += count;
}

ShareGraph ShareGraph::of(const NetworkSpec& net) {
  ShareGraph g(net.parties.size());
  for (const auto& s : net.sources) {
    const IndexSet ps = parties_of_source(s);
    for (std::size_t a = 0; a < ps.size(); ++a)
      for (std::size_t b = a + 1; b < ps.size(); ++b) g.add_edge(ps[a], ps[b]);
  }
  return g;
}

ShareGraph ShareGraph::from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  ShareGraph g(n);
  for (const auto& [a, b] : edges) g.add_edge(a, b);
  return g;
}

std::size_t ShareGraph::degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < size(); ++j) d += mult(i, j) > 0 ? 1 : 0;
  return d;
}

std::size_t ShareGraph::min_degree() const {
  std::size_t m = size() == 0 ? 0 : degree(0);
  for (std::size_t i = 1; i < size(); ++i) m = std::min(m, degree(i));
  return m;
}

bool ShareGraph::is_complete() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (!has_edge(i, j)) return false;
  return true;
}

bool ShareGraph::is_connected() const {
  std::vector<std::vector<bool>> adj(size(), std::vector<bool>(size()));
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) adj[i][j] = has_edge(i, j);
  return connected_on(adj, std::vector<bool>(size(), true));
}

ShareGraph ShareGraph::induced(const IndexSet& nodes) const {
  ShareGraph g(nodes.size());
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      if (const std::size_t m = mult(nodes[a], nodes[b])) g.add_edge(a, b, m);
  return g;
}

// ------------------------------------------------------------ graph criteria

Independence k_independence(const ShareGraph& g) {
  const std::size_t n = g.size();
  if (n > 24) throw CapacityExceeded("independent-set search is limited to 24 parties");
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g.has_edge(i, j)) adj[i] |= std::uint32_t{1} << j;
  std::uint32_t best = 0;
  int best_size = 0;
  const std::uint32_t limit = n == 0 ? 1u : (std::uint32_t{1} << n);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const int size = __builtin_popcount(mask);
    if (size <= best_size) continue;
    bool independent = true;
    for (std::size_t i = 0; i < n && independent; ++i)
      if ((mask >> i & 1u) && (adj[i] & mask)) independent = false;
    if (independent) {
      best = mask;
      best_size = size;
    }
  }
  Independence out;
  out.k = static_cast<std::size_t>(best_size);
  for (std::size_t i = 0; i < n; ++i)
    if (best >> i & 1u) out.parties.push_back(i);
  return out;
}

Independence k_independence(const NetworkSpec& net) { return k_independence(ShareGraph::of(net)); }

bool is_completely_connected(const NetworkSpec& net) { return ShareGraph::of(net).is_complete(); }

std::size_t min_degree(const NetworkSpec& net) { return ShareGraph::of(net).min_degree(); }

std::size_t edge_disjoint_paths(const ShareGraph& g, std::size_t i, std::size_t j) {
  if (i >= g.size() || j >= g.size()) throw InvalidInput("edge-disjoint paths: party index out of range");
  if (i == j) throw InvalidInput("edge-disjoint paths: endpoints must differ");
  using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using Graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, long,
                      boost::property<boost::edge_residual_capacity_t, long,
                                      boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
  Graph net(g.size());
  auto cap = boost::get(boost::edge_capacity, net);
  auto rev = boost::get(boost::edge_reverse, net);
  // Each undirected edge becomes two opposite arcs of full capacity, each
  // serving as the other's residual partner.
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = a + 1; b < g.size(); ++b) {
      const std::size_t m = g.mult(a, b);
      if (m == 0) continue;
      const auto e1 = boost::add_edge(a, b, net).first;
      const auto e2 = boost::add_edge(b, a, net).first;
      cap[e1] = cap[e2] = static_cast<long>(m);
      rev[e1] = e2;
      rev[e2] = e1;
    }
  return static_cast<std::size_t>(boost::edmonds_karp_max_flow(net, i, j));
}

std::size_t edge_disjoint_paths(const NetworkSpec& net, std::size_t i, std::size_t j) {
  return edge_disjoint_paths(ShareGraph::of(net), i, j);
}

NetworkReport classify_network(const NetworkSpec& net) {
  net.validate();
  const ShareGraph g = ShareGraph::of(net);
  NetworkReport r;
  r.num_parties = g.size();
  const Independence ind = k_independence(g);
  r.k_independence = ind.k;
  r.independent_set = ind.parties;
  r.particle_lose_separable = ind.k >= 2;
  if (r.particle_lose_separable) r.witnessing_loss_set = complement(ind.parties, g.size());
  r.completely_connected = g.is_complete();
  r.robust = r.completely_connected && g.size() >= 3;
  r.connected = g.is_connected();
  r.min_degree = g.min_degree();
  if (net.all_bipartite() && r.connected && r.min_degree >= 1) r.predicted_depth = r.min_degree - 1;
  std::vector<std::size_t> held(g.size(), 0);
  for (const auto& s : net.sources)
    if (s.state.num_subsystems() == 2)
      for (std::size_t p : parties_of_source(s)) ++held[p];
  r.bipartite_cap = held.empty() ? 0 : *std::max_element(held.begin(), held.end());
  if (net.all_bipartite() && r.bipartite_cap >= 1) r.cap_depth_bound = r.bipartite_cap - 1;
  return r;
}

bool source_graph_connected(const NetworkSpec& net, const NetworkState& built, const IndexSet& lost) {
  const std::size_t n = net.parties.size();
  std::vector<bool> alive(n, false);
  std::vector<bool> broken(net.sources.size(), false);
  for (std::size_t i = 0; i < built.order.size(); ++i) {
    if (std::binary_search(lost.begin(), lost.end(), i))
      broken[built.source_of[i]] = true;
    else
      alive[built.ownership.party_of(i)] = true;
  }
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (std::size_t si = 0; si < net.sources.size(); ++si) {
    if (broken[si]) continue;
    const IndexSet ps = parties_of_source(net.sources[si]);
    for (std::size_t a : ps)
      for (std::size_t b : ps)
        if (a != b) adj[a][b] = true;
  }
  return connected_on(adj, alive);
}

Crosscheck depth_crosscheck(const NetworkSpec& net, LossMode mode, std::size_t max_dim, const DepthOptions& opts) {
  const NetworkState built = build_state(net, max_dim);
  const NetworkReport rep = classify_network(net);
  DepthOptions o = opts;
  o.mode = mode;
  Crosscheck out;
  out.depth = robustness_depth(StateRef(built.state), built.ownership, o);
  out.predicted = rep.predicted_depth;
  out.agrees = out.predicted && *out.predicted == out.depth.depth && !out.depth.unknown_at_size;
  if (mode == LossMode::Particle) {
    const ShareGraph g = ShareGraph::of(net);
    const std::size_t admissible = built.ownership.num_particles() - 2;
    const std::size_t limit = o.max_loss == 0 ? admissible : std::min(o.max_loss, admissible);
    for (std::size_t m = 1; m <= limit; ++m) {
      const auto sets = admissible_loss_sets(built.ownership, LossMode::Particle, m);
      std::vector<ConnectivityCheck> checks(sets.size());
      const auto count = static_cast<std::ptrdiff_t>(sets.size());
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t k = 0; k < count; ++k) {
        const IndexSet& lost = sets[static_cast<std::size_t>(k)];
        ConnectivityCheck& c = checks[static_cast<std::size_t>(k)];
        c.lost = lost;
        const LossResult red = lose(built.state, {LossMode::Particle, lost}, built.ownership);
        c.status = classify_reduction(red.state, o.witness).status;
        c.share_graph_connected = g.induced(red.surviving_parties).is_connected();
        c.source_graph_connected = source_graph_connected(net, built, lost);
        c.consistent = (c.status == Status::Entangled) == c.source_graph_connected;
      }
      for (auto& c : checks) out.connectivity.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace lossent
