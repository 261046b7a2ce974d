#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <vector>

#include "affectsim/emotion.hpp"

using affectsim::EmotionCode;
using affectsim::MutationParams;
using affectsim::Rng;
using affectsim::StreamKind;

namespace {

Rng make_rng(std::uint64_t seed = 0xABCDEF12345ULL) { return Rng(seed); }

EmotionCode random_code(int m, Rng& rng) {
  return EmotionCode::with_etv(static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(m))),
                               m, rng);
}

}  // namespace

TEST_CASE("etv counts set bits") {
  auto rng = make_rng();
  EmotionCode code = EmotionCode::zeros(32);
  CHECK(code.etv() == 0);
  code.set_bit(1, true);
  code.set_bit(2, true);
  code.set_bit(31, true);
  CHECK(code.etv() == 3);

  CHECK(EmotionCode::with_etv(0, 32, rng).etv() == 0);
  CHECK(EmotionCode::with_etv(32, 32, rng).etv() == 32);
  // zero/full cases are forced bit patterns
  const auto full = EmotionCode::with_etv(32, 32, rng);
  for (int i = 0; i < 32; ++i) CHECK(full.bit(i));
}

TEST_CASE("with_etv validates arguments") {
  auto rng = make_rng();
  CHECK_THROWS_AS(EmotionCode::with_etv(-1, 32, rng), std::invalid_argument);
  CHECK_THROWS_AS(EmotionCode::with_etv(33, 32, rng), std::invalid_argument);
  CHECK_THROWS_AS(EmotionCode::with_etv(3, 31, rng), std::invalid_argument);
  CHECK_THROWS_AS(EmotionCode::with_etv(0, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(EmotionCode::zeros(-4), std::invalid_argument);
}

TEST_CASE("with_etv places bits uniformly") {
  auto rng = make_rng(7);
  const int m = 32, target = 21, draws = 10000;
  std::vector<int> hits(m, 0);
  for (int d = 0; d < draws; ++d) {
    const auto code = EmotionCode::with_etv(target, m, rng);
    REQUIRE(code.etv() == target);
    for (int i = 0; i < m; ++i) hits[i] += code.bit(i) ? 1 : 0;
  }
  const double expected = static_cast<double>(target) / m;
  for (int i = 0; i < m; ++i) {
    CHECK(std::abs(static_cast<double>(hits[i]) / draws - expected) < 0.02);
  }
}

TEST_CASE("mutate with rate 0 is the identity") {
  auto rng = make_rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto code = random_code(32, rng);
    CHECK(mutate(code, MutationParams{0.0}, rng) == code);
  }
}

TEST_CASE("mutate on all-zero code with rate 1 sets a prefix") {
  auto rng = make_rng(13);
  const auto zero = EmotionCode::zeros(32);
  for (int trial = 0; trial < 200; ++trial) {
    const auto out = mutate(zero, MutationParams{1.0}, rng);
    const int ones = out.etv();
    // all flipped bits form the prefix [0, len)
    for (int i = 0; i < ones; ++i) CHECK(out.bit(i));
    for (int i = ones; i < 32; ++i) CHECK(!out.bit(i));
  }
}

TEST_CASE("mutate keeps length and never alters the input") {
  auto rng = make_rng(17);
  const auto code = random_code(32, rng);
  const auto copy = code;
  const auto out = mutate(code, MutationParams{0.5}, rng);
  CHECK(code == copy);
  CHECK(out.length() == 32);
  CHECK(out.etv() >= 0);
  CHECK(out.etv() <= 32);
}

TEST_CASE("mutate expected flip count is rate * m/2") {
  auto rng = make_rng(19);
  const int m = 32, trials = 100000;
  const MutationParams params{0.05};
  const auto zero = EmotionCode::zeros(m);
  long long flips = 0;
  for (int trial = 0; trial < trials; ++trial) {
    flips += mutate(zero, params, rng).etv();  // every flip of a zero code sets a bit
  }
  const double mean = static_cast<double>(flips) / trials;
  CHECK(mean == doctest::Approx(0.05 * m / 2.0).epsilon(0.05));
}

TEST_CASE("crossover copies one segment bit-exactly") {
  auto rng = make_rng(23);
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 32;
    const auto node = random_code(m, rng);
    const auto info = random_code(m, rng);
    const double gamma = rng.uniform();
    const int len = static_cast<int>(std::floor(gamma * m));

    // replay the offset draw to know the segment exactly
    Rng probe = rng;
    const int start =
        static_cast<int>(probe.uniform_int(0, static_cast<std::uint64_t>(m - len)));
    const auto out = crossover(node, info, gamma, rng);

    for (int i = 0; i < m; ++i) {
      const bool inside = i >= start && i < start + len;
      CHECK(out.bit(i) == (inside ? info.bit(i) : node.bit(i)));
    }
  }
}

TEST_CASE("crossover trivial cases") {
  auto rng = make_rng(29);
  const auto node = random_code(8, rng);
  const auto info = random_code(8, rng);

  CHECK(crossover(node, info, 0.0, rng) == node);  // zero-length copy

  // opposite extremes at half-length: exactly four contiguous ones appear
  const auto zeros = EmotionCode::zeros(8);
  auto ones = EmotionCode::zeros(8);
  for (int i = 0; i < 8; ++i) ones.set_bit(i, true);
  for (int trial = 0; trial < 100; ++trial) {
    const auto out = crossover(zeros, ones, 0.5, rng);
    CHECK(out.etv() == 4);
    int first = 0;
    while (!out.bit(first)) ++first;
    for (int i = first; i < first + 4; ++i) CHECK(out.bit(i));
  }

  // equal codes stay equal for every gamma
  for (double gamma : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(crossover(node, node, gamma, rng) == node);
  }

  const auto longer = EmotionCode::zeros(16);
  CHECK_THROWS_AS(crossover(node, longer, 0.5, rng), std::invalid_argument);
}

TEST_CASE("crossover_segment matches the random wrapper contract") {
  auto rng = make_rng(31);
  const auto node = random_code(32, rng);
  const auto info = random_code(32, rng);
  const auto out = crossover_segment(node, info, 10, 12);
  for (int i = 0; i < 32; ++i) {
    const bool inside = i >= 10 && i < 22;
    CHECK(out.bit(i) == (inside ? info.bit(i) : node.bit(i)));
  }
}

TEST_CASE("operators keep etv in range over random sequences") {
  auto rng = make_rng(37);
  auto code = random_code(32, rng);
  const auto info = random_code(32, rng);
  for (int step = 0; step < 2000; ++step) {
    code = (step % 2 == 0) ? mutate(code, MutationParams{0.3}, rng)
                           : crossover(code, info, rng.uniform(), rng);
    CHECK(code.length() == 32);
    CHECK(code.etv() >= 0);
    CHECK(code.etv() <= 32);
  }
}

TEST_CASE("fixed seeds reproduce operator outputs") {
  auto a = Rng::derive(99, StreamKind::Agent, 5);
  auto b = Rng::derive(99, StreamKind::Agent, 5);
  auto ca = random_code(32, a);
  auto cb = random_code(32, b);
  CHECK(ca == cb);
  for (int i = 0; i < 100; ++i) {
    ca = mutate(ca, MutationParams{0.1}, a);
    cb = mutate(cb, MutationParams{0.1}, b);
    CHECK(ca == cb);
  }
}
