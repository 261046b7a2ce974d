#pragma once

#include <functional>
#include <vector>

namespace affectsim {

// Population shares of the two compartments at time t.
struct MeanFieldState {
  double t = 0.0;
  double s = 0.0;  // ignorant share
  double i = 0.0;  // spreader share
};

// Fixed-step RK4 integration of
//   ds/dt = gamma*i - beta(t)*s*i
//   di/dt = beta(t)*s*i - gamma*i
// from (s, i) = (1 - i0, i0) to `horizon`. The two right-hand sides are
// exact negatives of each other, so s + i is conserved to rounding.
// beta_fn may be a constant or a per-round rate profile sampled from a
// completed agent run. Throws if a step leaves [0, 1] beyond tolerance,
// which indicates dt is too large.
std::vector<MeanFieldState> integrate(const std::function<double(double)>& beta_fn, double gamma,
                                      double i0, double horizon, double dt);

}  // namespace affectsim
