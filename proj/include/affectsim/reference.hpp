#pragma once

#include <cstdint>
#include <vector>

#include "affectsim/engine.hpp"

namespace affectsim::reference {

// Serial reference implementation of the round dynamics, kept as the oracle
// for the parallel engine and as the baseline in the benchmark.
//
// It re-implements the similarity function, the coupling terms, the rate
// mix and both genetic operators from scratch on plain integer lists, and
// walks the phases in separate passes over the nodes. It shares only the
// random-stream convention with the engine (same seed derivation, same
// per-node draw order), which is what makes traces comparable bit for bit.
SimulationTrace run(const WeightedGraph& graph, const std::vector<EmotionCode>& initial_codes,
                    const FragmentSchedule& schedule, const DynamicsParams& params,
                    std::uint64_t seed, int rounds = -1,
                    std::vector<EmotionCode>* final_codes = nullptr);

}  // namespace affectsim::reference
