#include "affectsim/esef.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "affectsim/graph.hpp"

namespace affectsim {

double esef(int e_node, int e_info, int t_local, const EsefParams& params) {
  if (e_node < 0 || e_node > params.m || e_info < 0 || e_info > params.m) {
    throw std::invalid_argument("tendency values must lie in [0, " + std::to_string(params.m) +
                                "]");
  }
  if (t_local < 0) throw std::invalid_argument("segment-local round index must be >= 0");

  const double decay = 1.0 - params.theta_decay * static_cast<double>(t_local);
  if (decay <= 0.0) return 0.0;

  const double half = static_cast<double>(params.m) / 2.0;
  const double delta = static_cast<double>(e_node - e_info);
  const double base = params.d * std::exp(-(delta * delta) / params.sigma);

  // Damping applies only across the neutral midpoint. A fragment sitting
  // exactly on the midpoint has no opposite side, which keeps the surface
  // symmetric under e -> m - e.
  double penalty = 1.0;
  if (e_info < half && e_node >= half) {
    penalty = std::exp(half - static_cast<double>(e_node));
  } else if (e_info > half && e_node <= half) {
    penalty = std::exp(static_cast<double>(e_node) - half);
  }

  const double value = (penalty * base) * decay;
  return value < 0.0 ? 0.0 : value;
}

double neighbor_coupling(const WeightedGraph& graph, int node, std::span<const int> etvs) {
  const auto neighbors = graph.neighbors(node);
  if (neighbors.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& edge : neighbors) {
    acc += edge.weight * static_cast<double>(etvs[static_cast<std::size_t>(edge.to)]);
  }
  return acc / static_cast<double>(neighbors.size());
}

double global_coupling(std::span<const int> etvs) {
  if (etvs.empty()) throw std::invalid_argument("global coupling of an empty network");
  long long sum = 0;
  for (const int e : etvs) sum += e;
  return static_cast<double>(sum) / static_cast<double>(etvs.size());
}

double spread_rate(double gamma_esef, double neighbor_m, double phi, const RateWeights& weights,
                   int m) {
  const double md = static_cast<double>(m);
  const double a = weights.w_gamma * gamma_esef;
  const double b = weights.w_neighbor * (neighbor_m / md);
  const double c = weights.w_global * (phi / md);
  double beta = (a + b) + c;
  if (beta < 0.0) beta = 0.0;
  if (beta > 1.0) beta = 1.0;
  return beta;
}

}  // namespace affectsim
