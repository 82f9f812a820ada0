#pragma once

#include <vector>

#include "lpmono/geometry.hpp"
#include "lpmono/rng.hpp"

namespace lpmono::internal {

inline std::vector<double> draw_cube(SplitMix64& g, int dim, double half_width) {
  std::vector<double> v(dim);
  for (double& c : v) c = g.uniform(-half_width, half_width);
  return v;
}

// Rejection sampling from the closed l_s ball of radius d. High dimensions
// make cube rejection hopeless, so after a bounded number of attempts the
// last draw is pulled back just inside the ball instead.
inline std::vector<double> draw_ball_reject(SplitMix64& g, const SpaceSpec& sp, double d) {
  std::vector<double> v;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    v = draw_cube(g, sp.dim, d);
    if (lp_norm(v, sp.s) <= d) return v;
  }
  const double r = lp_norm(v, sp.s);
  for (double& c : v) c *= 0.999 * d / r;
  return v;
}

// Cube draw rescaled into the ball when it lands outside. Cheaper than
// rejection and boundary-heavy, which is what the sup estimator wants.
inline std::vector<double> draw_ball_pull(SplitMix64& g, const SpaceSpec& sp, double radius) {
  std::vector<double> v = draw_cube(g, sp.dim, radius);
  const double r = lp_norm(v, sp.s);
  if (r > radius)
    for (double& c : v) c *= radius / r;
  return v;
}

}  // namespace lpmono::internal
