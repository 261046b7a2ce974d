#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "affectsim/engine.hpp"
#include "affectsim/reference.hpp"

using namespace affectsim;

namespace {

WeightedGraph path_graph(int n, double w = 1.0) {
  WeightedGraph g(n);
  for (int u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1, w);
  return g;
}

std::vector<EmotionCode> fixed_codes(std::vector<int> etvs, int m, std::uint64_t seed) {
  Rng rng = Rng::derive(seed, StreamKind::InitCodes);
  std::vector<EmotionCode> codes;
  for (const int e : etvs) codes.push_back(EmotionCode::with_etv(e, m, rng));
  return codes;
}

FragmentSchedule one_fragment(int etv, int duration, int m = 32) {
  return build_schedule(std::vector<FragmentSpec>{{etv, duration}}, m);
}

bool traces_equal(const SimulationTrace& a, const SimulationTrace& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    const auto& ra = a.records[t];
    const auto& rb = b.records[t];
    if (ra.t != rb.t || ra.fragment != rb.fragment || ra.t_local != rb.t_local) return false;
    if (ra.ignorant != rb.ignorant || ra.spreader != rb.spreader) return false;
    if (ra.phi != rb.phi || ra.mean_beta != rb.mean_beta) return false;
    if (ra.etvs != rb.etvs || ra.compartments != rb.compartments) return false;
  }
  return true;
}

DynamicsParams default_params() {
  DynamicsParams p;
  p.gamma_forget = 0.1;
  return p;
}

}  // namespace

TEST_CASE("seeding: uniform rate forces the spreader count") {
  // every node matches the fragment, similarity weights only -> beta = d
  const int n = 100;
  auto g = path_graph(n);
  std::vector<int> etvs(n, 17);

  DynamicsParams params = default_params();
  params.weights = RateWeights{1.0, 0.0, 0.0};
  const auto schedule = one_fragment(17, 10);

  Rng seeding = Rng::derive(5, StreamKind::Seeding);
  const auto s = seed_initial(g, etvs, schedule, params, seeding);
  CHECK(s.initial_spreaders == static_cast<int>(std::llround(0.67 * n)));
  CHECK(s.mean_beta == doctest::Approx(0.67));
  int spreaders = 0;
  for (const auto c : s.compartments) spreaders += c == Compartment::Spreader ? 1 : 0;
  CHECK(spreaders == s.initial_spreaders);
}

TEST_CASE("seeding: zero rate raises") {
  const int n = 20;
  auto g = path_graph(n);
  std::vector<int> etvs(n, 17);
  DynamicsParams params = default_params();
  params.weights = RateWeights{0.0, 0.0, 0.0};
  const auto schedule = one_fragment(17, 10);
  Rng seeding = Rng::derive(6, StreamKind::Seeding);
  CHECK_THROWS_AS(seed_initial(g, etvs, schedule, params, seeding), std::runtime_error);
}

TEST_CASE("seeding is reproducible") {
  SimConfig cfg;
  cfg.num_all = 300;
  cfg.fragments = {{21, 5}};
  cfg.network.bridge_edges = 10;
  const auto a = run(cfg);
  const auto b = run(cfg);
  CHECK(a.trace.records.front().spreader == b.trace.records.front().spreader);
  CHECK(traces_equal(a.trace, b.trace));
}

TEST_CASE("forced transitions: forgetting keeps codes, empties the pool") {
  const int n = 10;
  auto g = path_graph(n);
  const auto schedule = one_fragment(17, 5);
  // nodes carry the fragment's exact code: receptions copy identical bits
  std::vector<EmotionCode> codes(n, schedule.fragment(0).code);
  DynamicsParams params = default_params();
  params.weights = RateWeights{1.0, 0.0, 0.0};  // nonzero so seeding succeeds
  params.gamma_forget = 1.0;
  params.mutation.rate = 0.0;

  Engine engine(g, codes, schedule, params, 7);
  engine.seed_compartments();
  const auto initial = engine.trace().records.front();
  CHECK(initial.spreader > 0);

  const auto& rec = engine.step();
  CHECK(rec.spreader == 0);  // certain forgetting beats any reception
  CHECK(rec.ignorant == n);
  CHECK(rec.etvs == initial.etvs);
  for (int v = 0; v < n; ++v) CHECK(engine.codes()[v] == codes[static_cast<std::size_t>(v)]);
}

TEST_CASE("forced infection copies a fragment segment") {
  // two nodes, one edge; node 0 spreads, node 1 matches the fragment exactly
  // so beta = d -> force d = 1 for a certain infection
  WeightedGraph g(2);
  g.add_edge(0, 1, 1.0);
  Rng rng = Rng::derive(8, StreamKind::InitCodes);
  std::vector<EmotionCode> codes{EmotionCode::with_etv(17, 32, rng),
                                 EmotionCode::with_etv(17, 32, rng)};
  DynamicsParams params = default_params();
  params.esef.d = 1.0;
  params.weights = RateWeights{1.0, 0.0, 0.0};
  params.gamma_forget = 0.0;
  params.mutation.rate = 0.0;

  const auto schedule = one_fragment(17, 5);
  Engine engine(g, codes, schedule, params, 8);
  engine.seed_compartments();
  engine.step();
  // beta was 1 for both nodes: everyone who had a spreader neighbor is one now
  const auto& rec = engine.trace().records.back();
  CHECK(rec.spreader == 2);
  // gamma = esef = 1 -> the copy segment is the whole code
  CHECK(engine.codes()[0] == schedule.fragment(0).code);
  CHECK(engine.codes()[1] == schedule.fragment(0).code);
}

TEST_CASE("compartments conserve and etvs stay in range") {
  SimConfig cfg;
  cfg.num_all = 400;
  cfg.network.bridge_edges = 10;
  cfg.fragments = {{21, 10}, {5, 10}};
  cfg.seed = 99;
  const auto result = run(cfg);
  CHECK(result.trace.records.size() == 21);
  for (const auto& rec : result.trace.records) {
    CHECK(rec.ignorant + rec.spreader == 400);
    for (const int e : rec.etvs) {
      CHECK(e >= 0);
      CHECK(e <= 32);
    }
  }
}

TEST_CASE("quiet rounds leave codes bit-identical") {
  // no spreaders possible after a gamma=1 round with mutation off
  const int n = 12;
  auto g = path_graph(n);
  auto codes = fixed_codes(std::vector<int>(n, 16), 32, 12);
  DynamicsParams params = default_params();
  params.weights = RateWeights{1.0, 0.0, 0.0};
  params.gamma_forget = 1.0;
  params.mutation.rate = 0.0;

  Engine engine(g, codes, one_fragment(16, 6), params, 12);
  engine.seed_compartments();
  engine.step();  // all spreaders revert
  const auto after_first = engine.trace().records.back().etvs;
  engine.step();  // nothing left to spread, nothing mutates
  const auto& rec = engine.trace().records.back();
  CHECK(rec.spreader == 0);
  CHECK(rec.etvs == after_first);
}

TEST_CASE("trace length is rounds plus one") {
  SimConfig cfg;
  cfg.num_all = 50;
  cfg.network = NetworkConfig{NetworkConfig::Kind::Ws, 0.0, 3, 4, 0.0, 0};
  cfg.fragments = {{20, 7}};
  const auto result = run(cfg);
  CHECK(result.trace.records.size() == 8);

  // zero-round run: initial record only
  Prepared prep = prepare(cfg);
  DynamicsParams params{cfg.esef, cfg.weights, cfg.mutation, cfg.gamma_forget};
  Engine engine(prep.graph, prep.codes, prep.schedule, params, cfg.seed);
  const auto trace = engine.run_all(0);
  CHECK(trace.records.size() == 1);
  CHECK(trace.records.front().t == 0);
}

TEST_CASE("identical config and seed give identical traces") {
  SimConfig cfg;
  cfg.num_all = 200;
  cfg.network.bridge_edges = 5;
  cfg.fragments = {{21, 8}, {9, 8}};
  cfg.seed = 4242;
  const auto a = run(cfg);
  const auto b = run(cfg);
  CHECK(traces_equal(a.trace, b.trace));
  CHECK(a.final_codes == b.final_codes);
}

#ifdef _OPENMP
TEST_CASE("thread count does not change results") {
  SimConfig cfg;
  cfg.num_all = 300;
  cfg.network.bridge_edges = 10;
  cfg.fragments = {{21, 10}};
  cfg.seed = 31337;

  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto serial = run(cfg);
  omp_set_num_threads(4);
  const auto parallel = run(cfg);
  omp_set_num_threads(saved);
  CHECK(traces_equal(serial.trace, parallel.trace));
  CHECK(serial.final_codes == parallel.final_codes);
}
#endif

TEST_CASE("engine matches the serial reference on small substrates") {
  // 5-node graphs, 10 rounds, many seeds; both simulators walk the same
  // streams, so any divergence in the round logic shows up as a mismatch
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    WeightedGraph g = seed % 2 == 0 ? path_graph(5, 0.8) : [] {
      WeightedGraph ring(5);
      for (int u = 0; u < 5; ++u) ring.add_edge(u, (u + 1) % 5, 0.6);
      return ring;
    }();

    Rng init = Rng::derive(seed, StreamKind::InitCodes);
    InitConfig icfg;
    icfg.etv_mu = 20.0;  // near the first fragment so tiny populations seed
    icfg.etv_sigma = 2.0;
    const auto etvs = init_etvs(5, icfg, init);
    const auto codes = codes_from_etvs(etvs, 32, init);

    const auto schedule =
        build_schedule(std::vector<FragmentSpec>{{21, 4}, {6, 6}}, 32);
    DynamicsParams params = default_params();
    params.mutation.rate = 0.05;

    Engine engine(g, codes, schedule, params, seed);
    const auto engine_trace = engine.run_all();
    std::vector<EmotionCode> engine_final(engine.codes().begin(), engine.codes().end());

    std::vector<EmotionCode> reference_final;
    const auto reference_trace =
        reference::run(g, codes, schedule, params, seed, -1, &reference_final);

    REQUIRE(traces_equal(engine_trace, reference_trace));
    REQUIRE(engine_final == reference_final);
  }
}
