#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace affectsim {

// Stateless 64-bit mixer (splitmix64 finalizer). Used to spread one master
// seed into independent, well-separated stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Every consumer of randomness in a run draws from its own named stream, so
// reordering or parallelising consumers never changes any sequence.
enum class StreamKind : std::uint64_t {
  Graph = 1,      // substrate construction
  Weights = 2,    // edge-weight assignment
  InitCodes = 4,  // initial node tendency values and codes
  Seeding = 5,    // initial spreader selection
  Agent = 6,      // one stream per node, indexed by node id
  Vote = 7,       // ballot abstention draws
};

// Deterministic random stream. mt19937_64 core with hand-rolled draw
// functions: the standard specifies the engine bit-exactly but not the
// distributions, and traces must reproduce across platforms and stdlibs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng derive(std::uint64_t master, StreamKind kind, std::uint64_t index = 0) {
    return Rng(mix64(mix64(master + static_cast<std::uint64_t>(kind)) + index));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [lo, hi], both inclusive. Requires hi >= lo and a
  // range far below 2^64 (modulo bias is irrelevant at the ranges used here).
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    return lo + next_u64() % (hi - lo + 1);
  }

  // Box-Muller, fixed two draws per call, no cached spare.
  double normal(double mu, double sigma) {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    return mu + sigma * (r * std::cos(two_pi * u2));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace affectsim
