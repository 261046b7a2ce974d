#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "affectsim/emotion.hpp"
#include "affectsim/esef.hpp"
#include "affectsim/graph.hpp"
#include "affectsim/schedule.hpp"

namespace affectsim {

enum class Compartment : std::uint8_t { Ignorant = 0, Spreader = 1 };

// Everything the round dynamics need besides the substrate and the schedule.
struct DynamicsParams {
  EsefParams esef;
  RateWeights weights;
  MutationParams mutation;
  double gamma_forget = 0.1;  // spreader -> ignorant probability per round
};

struct RoundRecord {
  int t = 0;         // 0 = initial state, k = state after k rounds
  int fragment = 0;  // 0-based index of the fragment driving this round
  int t_local = 0;
  int ignorant = 0;
  int spreader = 0;
  double phi = 0.0;        // network-mean tendency value
  double mean_beta = 0.0;  // population-mean spread rate of this round
  std::vector<int> etvs;
  std::vector<Compartment> compartments;
};

struct SimulationTrace {
  int node_count = 0;
  int code_length = 0;
  std::vector<RoundRecord> records;  // total_rounds + 1 entries
};

// Initial compartment assignment: the population-mean spread rate at round 0
// decides how many spreaders start, chosen uniformly at random.
struct Seeding {
  std::vector<Compartment> compartments;
  double mean_beta = 0.0;
  int initial_spreaders = 0;
};

Seeding seed_initial(const WeightedGraph& graph, std::span<const int> etvs,
                     const FragmentSchedule& schedule, const DynamicsParams& params,
                     Rng& seeding_rng);

// Round-based two-compartment dynamics over a fixed substrate.
//
// Each round is computed from a snapshot of the round-start state, so node
// evaluation order cannot change results and the inner loop parallelises.
// Per round, in order: (1) every round-start spreader broadcasts to all its
// neighbors; a contacted node turns (or stays) spreader with the dynamic
// spread rate and, on its first successful contact, has a segment of the
// fragment's code copied in; (2) every spreader forgets with probability
// gamma (code untouched); (3) every code drifts through mutation.
//
// Randomness contract (what makes parallel and serial runs identical): node
// v's draws all come from its own stream, derived as (seed, Agent, v), in
// the order: one uniform per contact in ascending spreader id, the copy
// offset after the first success, the forgetting draw while a spreader
// after step (1), then the mutation draws. Spreader selection at round 0
// comes from the (seed, Seeding) stream as a partial Fisher-Yates.
class Engine {
 public:
  Engine(const WeightedGraph& graph, std::vector<EmotionCode> codes, FragmentSchedule schedule,
         DynamicsParams params, std::uint64_t seed);

  // Assigns initial compartments; throws if the mean rate rounds to zero
  // spreaders. Records the initial trace row.
  void seed_compartments();

  // Advances one round; returns the appended record.
  const RoundRecord& step();

  // seed_compartments + `rounds` rounds (default: the whole schedule).
  SimulationTrace run_all(int rounds = -1);

  int t() const { return t_; }
  std::span<const Compartment> compartments() const { return compartments_; }
  std::span<const EmotionCode> codes() const { return codes_; }
  std::span<const int> etvs() const { return etvs_; }
  const SimulationTrace& trace() const { return trace_; }
  SimulationTrace take_trace() { return std::move(trace_); }

 private:
  RoundRecord make_record(int t, int fragment, int t_local, double mean_beta) const;

  const WeightedGraph& graph_;
  FragmentSchedule schedule_;
  DynamicsParams params_;
  std::uint64_t seed_;

  std::vector<EmotionCode> codes_;
  std::vector<EmotionCode> next_codes_;
  std::vector<int> etvs_;
  std::vector<Compartment> compartments_;
  std::vector<Compartment> next_compartments_;
  std::vector<Rng> streams_;
  std::vector<double> betas_;  // scratch, per-node spread rate of the round

  SimulationTrace trace_;
  int t_ = 0;
  bool seeded_ = false;
};

// Full simulation config, mirroring the shipped configuration files.
struct NetworkConfig {
  enum class Kind { Ba, Ws, Hybrid } kind = Kind::Hybrid;
  double ba_fraction = 0.5;
  int m_attach = 3;
  int k = 6;
  double p_rewire = 0.1;
  int bridge_edges = 50;
};

struct FragmentSpec {
  int etv = 0;
  int duration = 0;
};

struct SimConfig {
  int num_all = 3000;
  int m = 32;
  std::uint64_t seed = 42;
  double gamma_forget = 0.1;
  MutationParams mutation;
  EsefParams esef;
  RateWeights weights;
  InitConfig init;
  NetworkConfig network;
  std::vector<FragmentSpec> fragments;
  double p_abstain = 0.016;  // ballot-abstention probability of undecided voters

  int total_rounds() const;
};

// Builds the substrate, fragment codes and initial codes for `cfg`.
struct Prepared {
  WeightedGraph graph;
  std::vector<EmotionCode> codes;
  FragmentSchedule schedule;
};
Prepared prepare(const SimConfig& cfg);

// Fragment codes for the given specs, with evenly spread set bits.
FragmentSchedule build_schedule(std::span<const FragmentSpec> specs, int m);

struct RunResult {
  SimulationTrace trace;
  WeightedGraph graph;
  std::vector<EmotionCode> final_codes;
};

// prepare + seed + all rounds.
RunResult run(const SimConfig& cfg);

}  // namespace affectsim
