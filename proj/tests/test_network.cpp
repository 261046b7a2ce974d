#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "affectsim/graph.hpp"

using affectsim::EmotionCode;
using affectsim::InitConfig;
using affectsim::Rng;
using affectsim::StreamKind;
using affectsim::WeightedGraph;

namespace {

// Mean local clustering coefficient, triangles over wedges per node.
double clustering(const WeightedGraph& g) {
  double total = 0.0;
  for (int u = 0; u < g.node_count(); ++u) {
    const auto nbrs = g.neighbors(u);
    const int k = static_cast<int>(nbrs.size());
    if (k < 2) continue;
    int links = 0;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        if (g.has_edge(nbrs[static_cast<std::size_t>(i)].to,
                       nbrs[static_cast<std::size_t>(j)].to)) {
          ++links;
        }
      }
    }
    total += 2.0 * links / (static_cast<double>(k) * (k - 1));
  }
  return total / g.node_count();
}

}  // namespace

TEST_CASE("graph storage is symmetric and validated") {
  WeightedGraph g(5);
  g.add_edge(0, 1, 0.7);
  g.add_edge(3, 1, 0.2);
  CHECK(g.has_edge(1, 0));
  CHECK(g.has_edge(1, 3));
  CHECK(g.edge_count() == 2);
  CHECK(g.neighbors(1).size() == 2);
  // both directions carry the same weight
  CHECK(g.neighbors(0)[0].weight == 0.7);
  CHECK(g.neighbors(1)[0].weight == 0.7);

  CHECK_THROWS_AS(g.add_edge(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(g.add_edge(0, 9), std::invalid_argument);

  g.remove_edge(0, 1);
  CHECK(!g.has_edge(1, 0));
  CHECK(g.edge_count() == 1);
}

TEST_CASE("scale-free generator edge counts") {
  Rng rng = Rng::derive(5, StreamKind::Graph);
  const auto tree = generate_ba(5, 1, rng);
  CHECK(tree.edge_count() == 4);
  CHECK(tree.connected());

  const auto pair = generate_ba(2, 1, rng);
  CHECK(pair.edge_count() == 1);

  const auto big = generate_ba(3000, 3, rng);
  CHECK(big.edge_count() == 3 + 3 * (3000 - 3));
  CHECK(big.connected());

  // heavy tail: the maximum degree dwarfs the mean
  int max_degree = 0;
  for (int u = 0; u < big.node_count(); ++u) max_degree = std::max(max_degree, big.degree(u));
  CHECK(max_degree > 30);

  CHECK_THROWS_AS(generate_ba(3, 3, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_ba(10, 0, rng), std::invalid_argument);
}

TEST_CASE("small-world generator lattice and rewiring") {
  Rng rng = Rng::derive(6, StreamKind::Graph);
  const auto ring = generate_ws(10, 2, 0.0, rng);
  CHECK(ring.edge_count() == 10);
  for (int u = 0; u < 10; ++u) {
    CHECK(ring.has_edge(u, (u + 1) % 10));  // exact ring lattice
    CHECK(ring.degree(u) == 2);
  }

  const auto lattice = generate_ws(10, 4, 0.0, rng);
  CHECK(lattice.edge_count() == 20);
  for (int u = 0; u < 10; ++u) CHECK(lattice.degree(u) == 4);

  const auto sw = generate_ws(1000, 6, 0.1, rng);
  CHECK(sw.edge_count() == 3000);
  const double c_ring = 3.0 * (6 - 2) / (4.0 * (6 - 1));  // 0.6
  const double c_random = 6.0 / 1000.0;
  const double c = clustering(sw);
  CHECK(c < c_ring);
  CHECK(c > c_random);

  CHECK_THROWS_AS(generate_ws(10, 3, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_ws(4, 4, 0.1, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_ws(10, 4, 1.5, rng), std::invalid_argument);
}

TEST_CASE("hybrid generator composes the two substrates") {
  Rng rng = Rng::derive(7, StreamKind::Graph);
  const auto pure_ba = generate_hybrid(100, 1.0, 3, 6, 0.1, 0, rng);
  CHECK(pure_ba.edge_count() == 3 + 3 * (100 - 3));

  const auto pure_ws = generate_hybrid(100, 0.0, 3, 6, 0.1, 0, rng);
  CHECK(pure_ws.edge_count() == 100 * 6 / 2);

  const int n = 3000, bridges = 50;
  const auto mixed = generate_hybrid(n, 0.5, 3, 6, 0.1, bridges, rng);
  const std::size_t ba_edges = 3 + 3 * (1500 - 3);
  const std::size_t ws_edges = 1500 * 6 / 2;
  CHECK(mixed.edge_count() == ba_edges + ws_edges + bridges);
  CHECK(mixed.connected());
  // bridge endpoints straddle the component split
  int cross = 0;
  for (const auto& [u, v, w] : mixed.edges()) {
    (void)w;
    if (u < 1500 && v >= 1500) ++cross;
  }
  CHECK(cross == bridges);

  CHECK_THROWS_AS(generate_hybrid(100, 0.5, 3, 6, 0.1, 0, rng), std::invalid_argument);
}

TEST_CASE("weight assignment clamps into (0, 1]") {
  Rng rng = Rng::derive(8, StreamKind::Weights);
  InitConfig cfg;

  auto g = generate_ws(200, 4, 0.0, rng);
  cfg.weight_mu = 0.5;
  cfg.weight_sigma = 0.0;
  assign_weights(g, cfg, rng);
  for (const auto& [u, v, w] : g.edges()) {
    (void)u; (void)v;
    CHECK(w == 0.5);
  }

  cfg.weight_mu = 1.0;
  assign_weights(g, cfg, rng);
  for (const auto& [u, v, w] : g.edges()) {
    (void)u; (void)v;
    CHECK(w == 1.0);
  }

  auto big = generate_ws(4000, 6, 0.0, rng);  // 12000 edges
  cfg.weight_mu = 0.5;
  cfg.weight_sigma = 0.15;
  assign_weights(big, cfg, rng);
  double sum = 0.0;
  for (const auto& [u, v, w] : big.edges()) {
    (void)u; (void)v;
    CHECK(w > 0.0);
    CHECK(w <= 1.0);
    sum += w;
  }
  CHECK(sum / static_cast<double>(big.edge_count()) == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("initial tendency values follow the configured distribution") {
  Rng rng = Rng::derive(9, StreamKind::InitCodes);
  InitConfig cfg;

  cfg.etv_mu = 16.0;
  cfg.etv_sigma = 0.0;
  auto etvs = init_etvs(100, cfg, rng);
  for (const int e : etvs) CHECK(e == 16);

  cfg.etv_mu = 32.0;
  etvs = init_etvs(100, cfg, rng);
  for (const int e : etvs) CHECK(e == 32);

  cfg.etv_mu = 16.0;
  cfg.etv_sigma = 4.0;
  etvs = init_etvs(3000, cfg, rng);
  long long sum = 0;
  int extreme = 0;
  for (const int e : etvs) {
    CHECK(e >= 0);
    CHECK(e <= 32);
    sum += e;
    if (e <= 2 || e >= 30) ++extreme;
  }
  CHECK(static_cast<double>(sum) / 3000.0 == doctest::Approx(16.0).epsilon(0.0125));
  CHECK(static_cast<double>(extreme) / 3000.0 < 0.01);  // extremes are rare

  cfg.etv_mu = 40.0;
  CHECK_THROWS_AS(init_etvs(10, cfg, rng), std::invalid_argument);
}

TEST_CASE("codes match their target values") {
  Rng rng = Rng::derive(10, StreamKind::InitCodes);
  InitConfig cfg;
  const auto etvs = init_etvs(500, cfg, rng);
  const auto codes = codes_from_etvs(etvs, 32, rng);
  REQUIRE(codes.size() == etvs.size());
  for (std::size_t i = 0; i < codes.size(); ++i) CHECK(codes[i].etv() == etvs[i]);
}

TEST_CASE("generators are deterministic under a fixed seed") {
  Rng a = Rng::derive(123, StreamKind::Graph);
  Rng b = Rng::derive(123, StreamKind::Graph);
  const auto ga = generate_hybrid(400, 0.5, 3, 6, 0.1, 10, a);
  const auto gb = generate_hybrid(400, 0.5, 3, 6, 0.1, 10, b);
  CHECK(ga.edges() == gb.edges());
}

TEST_CASE("edge list round-trips byte for byte") {
  Rng rng = Rng::derive(11, StreamKind::Graph);
  auto g = generate_ba(50, 2, rng);
  InitConfig cfg;
  Rng wrng = Rng::derive(11, StreamKind::Weights);
  assign_weights(g, cfg, wrng);

  std::ostringstream first;
  write_edge_list(g, first);
  std::istringstream back(first.str());
  const auto parsed = affectsim::read_edge_list(back);
  CHECK(parsed.edges() == g.edges());

  std::ostringstream second;
  write_edge_list(parsed, second);
  CHECK(second.str() == first.str());
}
