#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lpmono/geometry.hpp"

namespace lpmono {

// A : E -> E* with the metadata the convergence theory asks about. claimed_eta
// is the strong-monotonicity constant in <x-y, Ax-Ay> >= eta ||x-y||^exponent
// (0 when nothing is claimed). apply_fn must be pure; the struct is immutable
// in use and safe to evaluate concurrently.
struct MonotoneOperator {
  SpaceSpec space;
  std::function<void(std::span<const double>, std::span<double>)> apply_fn;
  double claimed_eta = 0.0;
  double exponent = 2.0;
  std::optional<std::vector<double>> known_zero;

  void apply_into(std::span<const double> x, std::span<double> out) const { apply_fn(x, out); }
  DualPoint apply(const PrimalPoint& x) const;
};

// ||A(known_zero)|| in the dual norm; throws if there is no known zero.
double zero_residual(const MonotoneOperator& op);

// A(x)_i = c_i x_i - f0_i, zero at f0_i/c_i, eta = min c_i with exponent 2.
// f0 empty means 0. The exponent-2 claim is valid for s >= 2 because
// ||.||_s <= ||.||_2 there.
MonotoneOperator make_diagonal_linear(const SpaceSpec& space, std::vector<double> c,
                                      std::vector<double> f0 = {});

// A(x) = J(x) - J(z), zero at z by construction. Monotone since J is; no
// strong-monotonicity constant is claimed.
MonotoneOperator make_shifted_duality(const SpaceSpec& space, std::vector<double> z);

// A(x)_i = c_i x_i + tanh(x_i), zero at the origin, eta = min c_i.
MonotoneOperator make_smooth_diagonal(const SpaceSpec& space, std::vector<double> c);

// A = J - T, so zeros of A are the points with J(x) = T(x). t_map returns the
// dual coordinates of T(x).
MonotoneOperator from_j_pseudocontractive(
    const SpaceSpec& space, std::function<std::vector<double>(std::span<const double>)> t_map);

struct OperatorStats {
  double eta_hat = 0.0;
  double bound_hat = 0.0;
  double ball_radius = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Samples independent pairs in the ball of the given radius; eta_hat is the
// minimum pairing ratio <x-y, Ax-Ay>/||x-y||^exponent (reported raw, possibly
// negative), bound_hat the largest ||Ax|| seen.
OperatorStats estimate_stats(const MonotoneOperator& op, double ball_radius,
                             std::uint64_t samples, std::uint64_t seed);

}  // namespace lpmono
