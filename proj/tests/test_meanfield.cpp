#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "affectsim/meanfield.hpp"

using affectsim::integrate;

TEST_CASE("constant rates reach the endemic equilibrium") {
  const auto traj = integrate([](double) { return 0.4; }, 0.2, 0.01, 200.0, 0.01);
  CHECK(traj.back().i == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(traj.back().s == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("shares are conserved throughout") {
  const auto traj = integrate([](double) { return 0.4; }, 0.2, 0.01, 200.0, 0.01);
  for (const auto& state : traj) {
    CHECK(std::abs(state.s + state.i - 1.0) < 1e-9);
    CHECK(state.s >= 0.0);
    CHECK(state.i >= 0.0);
  }
}

TEST_CASE("equal rates decay the spreader share algebraically") {
  // beta == gamma turns the rate equation into di/dt = -beta * i^2, whose
  // solution is i(t) = 1 / (1/i0 + beta*t); at t = 100 that is exactly 1/32
  const auto traj = integrate([](double) { return 0.3; }, 0.3, 0.5, 100.0, 0.01);
  CHECK(traj.back().i == doctest::Approx(1.0 / 32.0).epsilon(1e-6));
  for (std::size_t k = 1; k < traj.size(); ++k) CHECK(traj[k].i <= traj[k - 1].i + 1e-12);
}

TEST_CASE("zero dynamics keep the state constant") {
  const auto traj = integrate([](double) { return 0.0; }, 0.0, 0.25, 10.0, 0.1);
  for (const auto& state : traj) {
    CHECK(state.i == 0.25);
    CHECK(state.s == doctest::Approx(0.75));
  }
}

TEST_CASE("pure forgetting decays monotonically to zero") {
  const auto traj = integrate([](double) { return 0.0; }, 0.2, 0.4, 80.0, 0.01);
  for (std::size_t k = 1; k < traj.size(); ++k) CHECK(traj[k].i < traj[k - 1].i);
  CHECK(traj.back().i == doctest::Approx(0.4 * std::exp(-0.2 * 80.0)).epsilon(1e-6));
}

TEST_CASE("halving dt shrinks the error fourth-order") {
  // mid-transient horizon keeps the accumulated error well above roundoff
  auto final_i = [](double dt) {
    return integrate([](double) { return 0.4; }, 0.2, 0.01, 15.0, dt).back().i;
  };
  const double coarse = final_i(0.5);
  const double medium = final_i(0.25);
  const double fine = final_i(0.125);
  const double e1 = std::abs(coarse - medium);
  const double e2 = std::abs(medium - fine);
  REQUIRE(e2 > 0.0);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(integrate([](double) { return 0.1; }, 0.1, 0.0, 10.0, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double) { return 0.1; }, 0.1, 1.0, 10.0, 0.01),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double) { return 0.1; }, 0.1, 0.5, 10.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double) { return 0.1; }, -0.1, 0.5, 10.0, 0.01),
                  std::invalid_argument);
}

TEST_CASE("a stepwise profile is consumed at the right times") {
  // rate jumps at t = 5: growth then decay
  const auto traj = integrate([](double t) { return t < 5.0 ? 0.8 : 0.0; }, 0.1, 0.1, 10.0, 0.01);
  const auto at = [&](double t) {
    return traj[static_cast<std::size_t>(std::llround(t / 0.01))].i;
  };
  CHECK(at(5.0) > at(0.0));
  CHECK(at(10.0) < at(5.0));
}
