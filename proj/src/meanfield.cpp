#include "affectsim/meanfield.hpp"

#include <cmath>
#include <stdexcept>

namespace affectsim {

namespace {

struct Derivative {
  double ds;
  double di;
};

Derivative rhs(double beta, double gamma, double s, double i) {
  const double recover = gamma * i;
  const double infect = beta * (s * i);
  return Derivative{recover - infect, infect - recover};
}

}  // namespace

std::vector<MeanFieldState> integrate(const std::function<double(double)>& beta_fn, double gamma,
                                      double i0, double horizon, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (i0 <= 0.0 || i0 >= 1.0) throw std::invalid_argument("i0 must lie strictly inside (0, 1)");
  if (horizon < 0.0) throw std::invalid_argument("horizon must be non-negative");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");

  const auto steps = static_cast<long long>(std::llround(horizon / dt));
  constexpr double tol = 1e-6;

  std::vector<MeanFieldState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(steps) + 1);

  double s = 1.0 - i0;
  double i = i0;
  trajectory.push_back(MeanFieldState{0.0, s, i});

  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Derivative k1 = rhs(beta_fn(t), gamma, s, i);
    const Derivative k2 =
        rhs(beta_fn(t + dt / 2.0), gamma, s + dt / 2.0 * k1.ds, i + dt / 2.0 * k1.di);
    const Derivative k3 =
        rhs(beta_fn(t + dt / 2.0), gamma, s + dt / 2.0 * k2.ds, i + dt / 2.0 * k2.di);
    const Derivative k4 = rhs(beta_fn(t + dt), gamma, s + dt * k3.ds, i + dt * k3.di);

    s += dt / 6.0 * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds);
    i += dt / 6.0 * (k1.di + 2.0 * k2.di + 2.0 * k3.di + k4.di);

    if (s < -tol || s > 1.0 + tol || i < -tol || i > 1.0 + tol) {
      throw std::runtime_error("integration left [0, 1]; decrease dt");
    }
    trajectory.push_back(MeanFieldState{static_cast<double>(k + 1) * dt, s, i});
  }
  return trajectory;
}

}  // namespace affectsim
