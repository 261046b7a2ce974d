#pragma once

#include <span>

#include "affectsim/graph_fwd.hpp"

namespace affectsim {

// Parameters of the emotional similarity evaluation function.
struct EsefParams {
  double d = 0.67;           // maximum scale (peak value at zero distance, t = 0)
  double sigma = 15.7079;    // spread-shape divisor of the squared-distance term
  double theta_decay = 0.05; // per-round linear decay rate, segment-local time
  int m = 32;                // emotion code length
};

// Time-decaying similarity between a node's and an information fragment's
// tendency values. Peaks at e_node == e_info with value d*(1 - theta*t) and
// is damped by exp(-distance-to-midpoint) when the two values sit on
// strictly opposite sides of the neutral midpoint m/2. Clamped below at 0;
// reaches 0 exactly once theta*t >= 1.
//
// Evaluation order is fixed as (penalty * base) * decay so independent
// implementations can agree bit-for-bit.
double esef(int e_node, int e_info, int t_local, const EsefParams& params);

// Mixing coefficients of the dynamic spread rate.
struct RateWeights {
  double w_gamma = 1.0;    // similarity term
  double w_neighbor = 0.1; // neighbor coupling term, pre-normalised by m
  double w_global = 0.1;   // global coupling term, pre-normalised by m
};

// Weighted neighbor-tendency average of one node: sum of neighbor ETV times
// edge weight, divided by the neighbor count. Isolated nodes couple to
// nothing and get 0.
double neighbor_coupling(const WeightedGraph& graph, int node, std::span<const int> etvs);

// Network-mean tendency value. Exact: integer sum, one division.
double global_coupling(std::span<const int> etvs);

// Per-node infection probability: w_gamma*gamma + w_neighbor*(M/m) +
// w_global*(phi/m), clamped into [0, 1]. Evaluation order fixed as
// (a + b) + c for cross-implementation agreement.
double spread_rate(double gamma_esef, double neighbor_m, double phi, const RateWeights& weights,
                   int m);

}  // namespace affectsim
