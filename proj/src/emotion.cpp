#include "affectsim/emotion.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace affectsim {

namespace {

void check_length(int m) {
  if (m <= 0 || m % 2 != 0) {
    throw std::invalid_argument("emotion code length must be a positive even integer, got " +
                                std::to_string(m));
  }
}

}  // namespace

EmotionCode EmotionCode::zeros(int m) {
  check_length(m);
  return EmotionCode(m);
}

EmotionCode EmotionCode::with_etv(int target_etv, int m, Rng& rng) {
  check_length(m);
  if (target_etv < 0 || target_etv > m) {
    throw std::invalid_argument("etv " + std::to_string(target_etv) + " outside [0, " +
                                std::to_string(m) + "]");
  }
  // Partial Fisher-Yates over the index range; the first `target_etv`
  // entries are a uniform sample of bit positions.
  std::vector<int> idx(static_cast<std::size_t>(m));
  std::iota(idx.begin(), idx.end(), 0);
  EmotionCode code(m);
  for (int i = 0; i < target_etv; ++i) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(m - 1)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
    code.set_bit(idx[static_cast<std::size_t>(i)], true);
  }
  return code;
}

EmotionCode EmotionCode::with_etv_even(int target_etv, int m) {
  check_length(m);
  if (target_etv < 0 || target_etv > m) {
    throw std::invalid_argument("etv " + std::to_string(target_etv) + " outside [0, " +
                                std::to_string(m) + "]");
  }
  EmotionCode code(m);
  for (int i = 0; i < target_etv; ++i) {
    code.set_bit(((2 * i + 1) * m) / (2 * target_etv), true);
  }
  return code;
}

int EmotionCode::etv() const {
  int count = 0;
  for (const auto b : bits_) count += b;
  return count;
}

EmotionCode mutate(const EmotionCode& code, const MutationParams& params, Rng& rng) {
  const int m = code.length();
  EmotionCode out = code;
  const int len = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(m)));
  for (int j = 0; j < len; ++j) {
    if (rng.bernoulli(params.rate)) out.flip_bit(j);
  }
  return out;
}

EmotionCode crossover(const EmotionCode& node_code, const EmotionCode& info_code, double gamma,
                      Rng& rng) {
  const int m = node_code.length();
  if (info_code.length() != m) {
    throw std::invalid_argument("crossover requires codes of equal length");
  }
  const int len = static_cast<int>(std::floor(gamma * m));
  const int start =
      static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(m - len)));
  return crossover_segment(node_code, info_code, start, len);
}

EmotionCode crossover_segment(const EmotionCode& node_code, const EmotionCode& info_code,
                              int start, int len) {
  EmotionCode out = node_code;
  for (int j = start; j < start + len; ++j) out.set_bit(j, info_code.bit(j));
  return out;
}

}  // namespace affectsim
