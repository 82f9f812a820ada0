#include "lpmono/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpmono/rng.hpp"
#include "sampling.hpp"

namespace lpmono {

namespace {

void check_sized(const std::vector<double>& v, const SpaceSpec& sp, const char* name) {
  if (static_cast<int>(v.size()) != sp.dim)
    throw ShapeError(std::string(name) + " has length " + std::to_string(v.size()) +
                     ", space.dim is " + std::to_string(sp.dim));
  check_finite(v, name);
}

void check_positive(const std::vector<double>& c) {
  for (double v : c)
    if (!(v > 0.0))
      throw ValidationError("diagonal coefficients must be > 0, got " + std::to_string(v));
}

}  // namespace

DualPoint MonotoneOperator::apply(const PrimalPoint& x) const {
  if (x.space != space) throw ShapeError("operator applied to a point from another space");
  std::vector<double> out(x.coords.size());
  apply_fn(x.coords, out);
  return DualPoint(std::move(out), space);
}

double zero_residual(const MonotoneOperator& op) {
  if (!op.known_zero) throw ValidationError("operator has no known zero");
  std::vector<double> out(op.known_zero->size());
  op.apply_fn(*op.known_zero, out);
  return lp_norm(out, op.space.s_conj);
}

MonotoneOperator make_diagonal_linear(const SpaceSpec& space, std::vector<double> c,
                                      std::vector<double> f0) {
  check_sized(c, space, "c");
  if (f0.empty()) f0.assign(space.dim, 0.0);
  check_sized(f0, space, "f0");
  check_positive(c);

  std::vector<double> zero(space.dim);
  for (int i = 0; i < space.dim; ++i) zero[i] = f0[i] / c[i];
  const double eta = *std::min_element(c.begin(), c.end());

  MonotoneOperator op;
  op.space = space;
  op.apply_fn = [c = std::move(c), f0 = std::move(f0)](std::span<const double> x,
                                                       std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = c[i] * x[i] - f0[i];
  };
  op.claimed_eta = eta;
  op.exponent = 2.0;
  op.known_zero = std::move(zero);
  return op;
}

MonotoneOperator make_shifted_duality(const SpaceSpec& space, std::vector<double> z) {
  check_sized(z, space, "z");
  std::vector<double> jz(space.dim);
  duality_map_into(space, z, jz);

  MonotoneOperator op;
  op.space = space;
  op.apply_fn = [space, jz = std::move(jz)](std::span<const double> x, std::span<double> out) {
    duality_map_into(space, x, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= jz[i];
  };
  op.claimed_eta = 0.0;
  op.exponent = space.p;
  op.known_zero = std::move(z);
  return op;
}

MonotoneOperator make_smooth_diagonal(const SpaceSpec& space, std::vector<double> c) {
  check_sized(c, space, "c");
  check_positive(c);
  const double eta = *std::min_element(c.begin(), c.end());

  MonotoneOperator op;
  op.space = space;
  op.apply_fn = [c = std::move(c)](std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = c[i] * x[i] + std::tanh(x[i]);
  };
  op.claimed_eta = eta;
  op.exponent = 2.0;
  op.known_zero = std::vector<double>(space.dim, 0.0);
  return op;
}

MonotoneOperator from_j_pseudocontractive(
    const SpaceSpec& space, std::function<std::vector<double>(std::span<const double>)> t_map) {
  MonotoneOperator op;
  op.space = space;
  op.apply_fn = [space, t_map = std::move(t_map)](std::span<const double> x,
                                                  std::span<double> out) {
    std::vector<double> t = t_map(x);
    if (static_cast<int>(t.size()) != space.dim)
      throw ShapeError("t_map returned " + std::to_string(t.size()) +
                       " coordinates, space.dim is " + std::to_string(space.dim));
    duality_map_into(space, x, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= t[i];
  };
  op.claimed_eta = 0.0;
  op.exponent = space.p;
  return op;
}

OperatorStats estimate_stats(const MonotoneOperator& op, double ball_radius,
                             std::uint64_t samples, std::uint64_t seed) {
  if (!(ball_radius > 0.0)) throw ValidationError("ball_radius must be > 0");
  if (samples < 2) throw ValidationError("samples must be >= 2");

  const SpaceSpec& sp = op.space;
  OperatorStats stats;
  stats.ball_radius = ball_radius;
  stats.samples = samples;
  stats.seed = seed;

  std::vector<double> ax(sp.dim), ay(sp.dim), diff(sp.dim), adiff(sp.dim);
  bool first = true;
  for (std::uint64_t i = 0; i < samples; ++i) {
    SplitMix64 g = substream(seed, i);
    std::vector<double> x = internal::draw_ball_pull(g, sp, ball_radius);
    std::vector<double> y = internal::draw_ball_pull(g, sp, ball_radius);
    op.apply_fn(x, ax);
    op.apply_fn(y, ay);
    stats.bound_hat = std::max({stats.bound_hat, lp_norm(ax, sp.s_conj), lp_norm(ay, sp.s_conj)});
    for (int k = 0; k < sp.dim; ++k) {
      diff[k] = x[k] - y[k];
      adiff[k] = ax[k] - ay[k];
    }
    const double dist = lp_norm(diff, sp.s);
    if (dist == 0.0) continue;
    const double ratio = dot(diff, adiff) / std::pow(dist, op.exponent);
    if (first || ratio < stats.eta_hat) {
      stats.eta_hat = ratio;
      first = false;
    }
  }
  return stats;
}

}  // namespace lpmono
