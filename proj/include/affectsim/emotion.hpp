#pragma once

#include <cstdint>
#include <vector>

#include "affectsim/rng.hpp"

namespace affectsim {

// Fixed-length binary emotion code. The number of set bits is the code's
// emotional tendency value (ETV): 0 = extreme opposition, m = extreme
// support, m/2 = neutral. Codes are immutable values; the operators below
// return new codes.
class EmotionCode {
 public:
  EmotionCode() = default;

  // All-zero code of even positive length m.
  static EmotionCode zeros(int m);

  // Code with exactly `etv` set bits, positions uniform among all placements.
  static EmotionCode with_etv(int etv, int m, Rng& rng);

  // Code with exactly `etv` set bits spread evenly across the positions.
  // Used for information fragments: segment copies then pull node codes
  // toward the fragment's tendency value regardless of where the copy
  // window lands, instead of toward the luck of one random layout.
  static EmotionCode with_etv_even(int etv, int m);

  int length() const { return static_cast<int>(bits_.size()); }
  bool bit(int i) const { return bits_[static_cast<std::size_t>(i)] != 0; }
  void set_bit(int i, bool v) { bits_[static_cast<std::size_t>(i)] = v ? 1 : 0; }
  void flip_bit(int i) { bits_[static_cast<std::size_t>(i)] ^= 1; }

  // ETV: count of set bits.
  int etv() const;

  friend bool operator==(const EmotionCode&, const EmotionCode&) = default;

 private:
  explicit EmotionCode(int m) : bits_(static_cast<std::size_t>(m), 0) {}
  std::vector<std::uint8_t> bits_;
};

inline int etv(const EmotionCode& code) { return code.etv(); }

struct MutationParams {
  double rate = 0.01;  // per-selected-bit flip probability, in [0, 1]
};

// Random drift of a code: draw a prefix length uniformly from {0..m}, select
// each prefix index independently with probability `rate`, flip the selected
// bits. Consumes 1 + len draws from `rng`.
EmotionCode mutate(const EmotionCode& code, const MutationParams& params, Rng& rng);

// One-directional segment copy from an information code into a node code.
// Segment length is floor(gamma * m); the start offset is drawn uniformly
// from {0..m-len} (one draw, consumed even when the length is zero). Bits
// outside [start, start+len) are untouched.
EmotionCode crossover(const EmotionCode& node_code, const EmotionCode& info_code,
                      double gamma, Rng& rng);

// Deterministic core of crossover, exposed for bit-exact testing.
EmotionCode crossover_segment(const EmotionCode& node_code, const EmotionCode& info_code,
                              int start, int len);

}  // namespace affectsim
