#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "affectsim/emotion.hpp"
#include "affectsim/rng.hpp"

namespace affectsim {

// Undirected weighted graph. Adjacency lists are kept sorted by neighbor id;
// both endpoints store the edge with the same weight. Once built, a graph is
// immutable during simulation and safely shared across threads.
class WeightedGraph {
 public:
  struct Edge {
    int to;
    double weight;
  };

  explicit WeightedGraph(int n);

  int node_count() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  // Adds an undirected edge. Rejects self-loops, duplicates, out-of-range ids.
  void add_edge(int u, int v, double weight = 1.0);

  // Removes an existing undirected edge (both directions).
  void remove_edge(int u, int v);

  bool has_edge(int u, int v) const;
  int degree(int u) const { return static_cast<int>(neighbors(u).size()); }
  std::span<const Edge> neighbors(int u) const {
    return adjacency_[static_cast<std::size_t>(u)];
  }

  // Reassigns the weight on an existing undirected edge (both directions).
  void set_weight(int u, int v, double weight);

  // Edges as (u, v, weight) with u < v, sorted lexicographically.
  std::vector<std::tuple<int, int, double>> edges() const;

  bool connected() const;

 private:
  void check_node(int u) const;
  std::vector<std::vector<Edge>> adjacency_;
  std::size_t edge_count_ = 0;
};

// Scale-free graph: clique on the first m_attach nodes, then preferential
// attachment of m_attach edges per new node. Connected by construction.
WeightedGraph generate_ba(int n, int m_attach, Rng& rng);

// Small-world graph: ring lattice with k neighbors per node (k even), each
// lattice edge rewired with probability p_rewire. Exactly n*k/2 edges.
WeightedGraph generate_ws(int n, int k, double p_rewire, Rng& rng);

// Composite substrate: floor(ba_fraction*n) nodes wired scale-free, the rest
// small-world, joined by `bridge_edges` uniformly random cross edges.
// Degenerate fractions 0 and 1 give the pure models.
WeightedGraph generate_hybrid(int n, double ba_fraction, int m_attach, int k, double p_rewire,
                              int bridge_edges, Rng& rng);

// Edge-weight and initial-tendency distribution parameters.
struct InitConfig {
  double weight_mu = 0.5;
  double weight_sigma = 0.15;
  double etv_mu = 16.0;
  double etv_sigma = 4.0;
  int m = 32;
};

// Draws every edge weight from Normal(weight_mu, weight_sigma^2), redrawing
// non-positive values and capping at 1, so all weights land in (0, 1].
// Edges are visited in sorted (u, v) order.
void assign_weights(WeightedGraph& graph, const InitConfig& cfg, Rng& rng);

// Initial per-node tendency values: Normal(etv_mu, etv_sigma^2) rounded to
// the nearest integer and clamped into [0, m].
std::vector<int> init_etvs(int n, const InitConfig& cfg, Rng& rng);

// Codes matching the given tendency values, random placements.
std::vector<EmotionCode> codes_from_etvs(std::span<const int> etvs, int m, Rng& rng);

// Plain-text edge list, one line per edge: "u v weight", 0-based ids,
// sorted by (u, v). Weights round-trip exactly.
void write_edge_list(const WeightedGraph& graph, std::ostream& out);
void write_edge_list(const WeightedGraph& graph, const std::string& path);
WeightedGraph read_edge_list(std::istream& in);
WeightedGraph read_edge_list(const std::string& path);

}  // namespace affectsim
