#include "affectsim/engine.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace affectsim {

namespace {

// Spread rate of node v against the active fragment, from round-start state.
// Shared by seeding and stepping; evaluation order is part of the
// reproducibility contract.
double node_rate(const WeightedGraph& graph, std::span<const int> etvs, int v,
                 const InfoFragment& frag, int t_local, double phi,
                 const DynamicsParams& params, double* gamma_out = nullptr) {
  const double gamma = esef(etvs[static_cast<std::size_t>(v)], frag.etv, t_local, params.esef);
  const double m_v = neighbor_coupling(graph, v, etvs);
  if (gamma_out != nullptr) *gamma_out = gamma;
  return spread_rate(gamma, m_v, phi, params.weights, params.esef.m);
}

}  // namespace

Seeding seed_initial(const WeightedGraph& graph, std::span<const int> etvs,
                     const FragmentSchedule& schedule, const DynamicsParams& params,
                     Rng& seeding_rng) {
  const int n = graph.node_count();
  if (static_cast<int>(etvs.size()) != n) {
    throw std::invalid_argument("etv array does not match the node count");
  }
  const InfoFragment& first = schedule.fragment(0);
  const double phi = global_coupling(etvs);

  double sum = 0.0;
  for (int v = 0; v < n; ++v) {
    sum += node_rate(graph, etvs, v, first, 0, phi, params);
  }
  const double mean_beta = sum / static_cast<double>(n);
  const int initial = static_cast<int>(std::llround(mean_beta * static_cast<double>(n)));
  if (initial <= 0) {
    throw std::runtime_error("no initial spreaders: mean spread rate rounds to zero");
  }

  // Partial Fisher-Yates over node ids; the first `initial` entries spread.
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  Seeding out;
  out.compartments.assign(static_cast<std::size_t>(n), Compartment::Ignorant);
  out.mean_beta = mean_beta;
  out.initial_spreaders = initial;
  for (int i = 0; i < initial; ++i) {
    const auto j = static_cast<std::size_t>(seeding_rng.uniform_int(
        static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(n - 1)));
    std::swap(ids[static_cast<std::size_t>(i)], ids[j]);
    out.compartments[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])] =
        Compartment::Spreader;
  }
  return out;
}

Engine::Engine(const WeightedGraph& graph, std::vector<EmotionCode> codes,
               FragmentSchedule schedule, DynamicsParams params, std::uint64_t seed)
    : graph_(graph),
      schedule_(std::move(schedule)),
      params_(params),
      seed_(seed),
      codes_(std::move(codes)) {
  const int n = graph_.node_count();
  if (static_cast<int>(codes_.size()) != n) {
    throw std::invalid_argument("code array does not match the node count");
  }
  next_codes_ = codes_;
  etvs_.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) etvs_[static_cast<std::size_t>(v)] = codes_[static_cast<std::size_t>(v)].etv();
  compartments_.assign(static_cast<std::size_t>(n), Compartment::Ignorant);
  next_compartments_ = compartments_;
  betas_.assign(static_cast<std::size_t>(n), 0.0);
  streams_.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    streams_.push_back(Rng::derive(seed_, StreamKind::Agent, static_cast<std::uint64_t>(v)));
  }
  trace_.node_count = n;
  trace_.code_length = codes_.empty() ? 0 : codes_.front().length();
}

RoundRecord Engine::make_record(int t, int fragment, int t_local, double mean_beta) const {
  RoundRecord rec;
  rec.t = t;
  rec.fragment = fragment;
  rec.t_local = t_local;
  rec.etvs = etvs_;
  rec.compartments = compartments_;
  rec.spreader = 0;
  for (const auto c : compartments_) rec.spreader += (c == Compartment::Spreader) ? 1 : 0;
  rec.ignorant = graph_.node_count() - rec.spreader;
  rec.phi = global_coupling(etvs_);
  rec.mean_beta = mean_beta;
  return rec;
}

void Engine::seed_compartments() {
  if (seeded_) throw std::logic_error("already seeded");
  Rng seeding_rng = Rng::derive(seed_, StreamKind::Seeding);
  Seeding s = seed_initial(graph_, etvs_, schedule_, params_, seeding_rng);
  compartments_ = std::move(s.compartments);
  seeded_ = true;
  const auto active = schedule_.active_at(0);
  trace_.records.push_back(make_record(0, active.index, active.t_local, s.mean_beta));
}

const RoundRecord& Engine::step() {
  if (!seeded_) throw std::logic_error("seed_compartments must run first");
  if (t_ >= schedule_.total_rounds()) throw std::logic_error("schedule exhausted");

  const auto active = schedule_.active_at(t_);
  const InfoFragment& frag = schedule_.fragment(active.index);
  const double phi = global_coupling(etvs_);
  const int n = graph_.node_count();

  // Round kernel. Every input is round-start state and every node writes
  // only its own slots and draws only from its own stream, so the loop is
  // deterministic for any thread count.
#pragma omp parallel for schedule(static)
  for (int v = 0; v < n; ++v) {
    const auto vi = static_cast<std::size_t>(v);
    Rng& rng = streams_[vi];
    double gamma_cross = 0.0;
    const double beta =
        node_rate(graph_, etvs_, v, frag, active.t_local, phi, params_, &gamma_cross);
    betas_[vi] = beta;

    Compartment state = compartments_[vi];
    bool received = false;
    for (const auto& edge : graph_.neighbors(v)) {
      if (compartments_[static_cast<std::size_t>(edge.to)] != Compartment::Spreader) continue;
      const bool success = rng.bernoulli(beta);
      if (success && !received) {
        received = true;
        state = Compartment::Spreader;
      }
    }
    // First successful contact copies one fragment segment; later successes
    // in the same round re-expose but do not overwrite again.
    EmotionCode code =
        received ? crossover(codes_[vi], frag.code, gamma_cross, rng) : codes_[vi];
    if (state == Compartment::Spreader && rng.bernoulli(params_.gamma_forget)) {
      state = Compartment::Ignorant;  // the emotion itself is not forgotten
    }
    code = mutate(code, params_.mutation, rng);

    next_codes_[vi] = std::move(code);
    next_compartments_[vi] = state;
  }

  std::swap(codes_, next_codes_);
  std::swap(compartments_, next_compartments_);
  for (int v = 0; v < n; ++v) etvs_[static_cast<std::size_t>(v)] = codes_[static_cast<std::size_t>(v)].etv();

  double beta_sum = 0.0;
  for (const double b : betas_) beta_sum += b;

  ++t_;
  trace_.records.push_back(
      make_record(t_, active.index, active.t_local, beta_sum / static_cast<double>(n)));
  return trace_.records.back();
}

SimulationTrace Engine::run_all(int rounds) {
  seed_compartments();
  const int total = rounds < 0 ? schedule_.total_rounds() : rounds;
  for (int t = 0; t < total; ++t) step();
  return trace_;
}

int SimConfig::total_rounds() const {
  int total = 0;
  for (const auto& f : fragments) total += f.duration;
  return total;
}

FragmentSchedule build_schedule(std::span<const FragmentSpec> specs, int m) {
  std::vector<InfoFragment> fragments;
  fragments.reserve(specs.size());
  for (const auto& spec : specs) {
    InfoFragment frag;
    frag.code = EmotionCode::with_etv_even(spec.etv, m);
    frag.etv = spec.etv;
    frag.duration = spec.duration;
    fragments.push_back(std::move(frag));
  }
  return FragmentSchedule(std::move(fragments));
}

Prepared prepare(const SimConfig& cfg) {
  Rng graph_rng = Rng::derive(cfg.seed, StreamKind::Graph);
  WeightedGraph graph = [&] {
    switch (cfg.network.kind) {
      case NetworkConfig::Kind::Ba:
        return generate_ba(cfg.num_all, cfg.network.m_attach, graph_rng);
      case NetworkConfig::Kind::Ws:
        return generate_ws(cfg.num_all, cfg.network.k, cfg.network.p_rewire, graph_rng);
      case NetworkConfig::Kind::Hybrid:
      default:
        return generate_hybrid(cfg.num_all, cfg.network.ba_fraction, cfg.network.m_attach,
                               cfg.network.k, cfg.network.p_rewire, cfg.network.bridge_edges,
                               graph_rng);
    }
  }();
  Rng weight_rng = Rng::derive(cfg.seed, StreamKind::Weights);
  assign_weights(graph, cfg.init, weight_rng);

  Rng init_rng = Rng::derive(cfg.seed, StreamKind::InitCodes);
  const std::vector<int> etvs = init_etvs(cfg.num_all, cfg.init, init_rng);
  std::vector<EmotionCode> codes = codes_from_etvs(etvs, cfg.m, init_rng);

  return Prepared{std::move(graph), std::move(codes),
                  build_schedule(cfg.fragments, cfg.m)};
}

RunResult run(const SimConfig& cfg) {
  Prepared prep = prepare(cfg);
  DynamicsParams params{cfg.esef, cfg.weights, cfg.mutation, cfg.gamma_forget};
  Engine engine(prep.graph, std::move(prep.codes), std::move(prep.schedule), params, cfg.seed);
  SimulationTrace trace = engine.run_all();
  std::vector<EmotionCode> final_codes(engine.codes().begin(), engine.codes().end());
  return RunResult{std::move(trace), std::move(prep.graph), std::move(final_codes)};
}

}  // namespace affectsim
