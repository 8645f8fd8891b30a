#pragma once

// Quantum networks: parties holding particles of independent entangled
// sources, the party sharing graph and network-level robustness analysis.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lossent/channels.hpp"
#include "lossent/tensor.hpp"
#include "lossent/witnesses.hpp"

namespace lossent {

struct ParticleSlot {
  std::size_t party = 0;
  /// Position among the party's particles; unset slots are filled in
  /// source declaration order after the explicit ones are placed.
  std::optional<std::size_t> slot;
};

struct Source {
  PureState state;
  std::vector<ParticleSlot> assignment;  // one entry per particle of `state`
  std::string family;                    // informational, e.g. "bipartite" or "dicke"
};

struct NetworkSpec {
  std::vector<std::string> parties;
  std::vector<Source> sources;

  /// Throws InvalidInput on unassigned particles, unknown parties, empty
  /// parties, clashing slots or unentangled two-particle sources.
  void validate() const;
  std::size_t num_particles() const;
  bool all_bipartite() const;
};

struct NetworkState {
  PureState state;  // party-grouped dims
  Ownership ownership;
  /// order[i] = raw particle index (sources concatenated in declaration
  /// order) placed at grouped position i.
  std::vector<std::size_t> order;
  /// source_of[i] = source index of grouped particle i.
  std::vector<std::size_t> source_of;
};

constexpr std::size_t kDefaultMaxDim = 4096;

NetworkState build_state(const NetworkSpec& net, std::size_t max_dim = kDefaultMaxDim);

/// Undirected multigraph on parties; mult(i, j) = number of sources spanning both.
class ShareGraph {
public:
  explicit ShareGraph(std::size_t n = 0);
  static ShareGraph of(const NetworkSpec& net);
  static ShareGraph from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t size() const noexcept { return mult_.size(); }
  std::size_t mult(std::size_t i, std::size_t j) const { return mult_.at(i).at(j); }
  bool has_edge(std::size_t i, std::size_t j) const { return mult(i, j) > 0; }
  void add_edge(std::size_t i, std::size_t j, std::size_t count = 1);
  /// Number of distinct neighbours; parallel sources count once.
  std::size_t degree(std::size_t i) const;
  std::size_t min_degree() const;
  bool is_complete() const;
  bool is_connected() const;
  /// Subgraph induced on `nodes` (relabelled 0..k-1 in the given order).
  ShareGraph induced(const IndexSet& nodes) const;

private:
  std::vector<std::vector<std::size_t>> mult_;
};

struct Independence {
  std::size_t k = 0;
  IndexSet parties;
};

/// Maximum independent set by exhaustive search (at most 24 parties).
Independence k_independence(const ShareGraph& g);
Independence k_independence(const NetworkSpec& net);

bool is_completely_connected(const NetworkSpec& net);
std::size_t min_degree(const NetworkSpec& net);

/// Maximum number of pairwise edge-disjoint paths, as a max-flow with edge
/// multiplicities as capacities.
std::size_t edge_disjoint_paths(const ShareGraph& g, std::size_t i, std::size_t j);
std::size_t edge_disjoint_paths(const NetworkSpec& net, std::size_t i, std::size_t j);

struct NetworkReport {
  std::size_t num_parties = 0;
  std::size_t k_independence = 0;
  IndexSet independent_set;
  bool particle_lose_separable = false;  // k >= 2
  IndexSet witnessing_loss_set;          // parties outside the independent set
  bool completely_connected = false;
  bool robust = false;
  bool connected = false;
  std::size_t min_degree = 0;
  std::optional<std::size_t> predicted_depth;  // deg - 1 for connected bipartite-source networks
  std::size_t bipartite_cap = 0;               // most bipartite sources held by one party
  std::optional<std::size_t> cap_depth_bound;  // cap - 1
};

NetworkReport classify_network(const NetworkSpec& net);

struct ConnectivityCheck {
  IndexSet lost;  // grouped particle indices
  Status status = Status::Unknown;
  bool share_graph_connected = false;   // original graph induced on surviving parties
  bool source_graph_connected = false;  // graph of fully surviving sources
  bool consistent = false;              // Entangled <=> source graph connected
};

struct Crosscheck {
  DepthReport depth;
  std::optional<std::size_t> predicted;
  bool agrees = false;
  std::vector<ConnectivityCheck> connectivity;  // particle mode only
};

Crosscheck depth_crosscheck(const NetworkSpec& net, LossMode mode, std::size_t max_dim = kDefaultMaxDim,
                            const DepthOptions& opts = {});

/// Surviving-source connectivity for a particle loss set.
bool source_graph_connected(const NetworkSpec& net, const NetworkState& built, const IndexSet& lost);

}  // namespace lossent
