#include "lpmono/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lpmono {

namespace {

void check_exponent(double e, const char* name) {
  if (!std::isfinite(e) || e <= 1.0)
    throw ValidationError(std::string(name) + " must be a finite real > 1, got " +
                          std::to_string(e));
}

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

// Shared by duality_map_into and inverse_duality_map_into: the gauge-g map
// of an l_e space. Written as ||v||^{g-1} (|v_i|/||v||)^{e-1} sign(v_i) so
// small norms do not underflow through the ||v||^{g-e} prefactor.
void gauge_map(std::span<const double> v, std::span<double> out, double e, double g) {
  if (e == 2.0 && g == 2.0) {
    std::copy(v.begin(), v.end(), out.begin());
    return;
  }
  const double r = lp_norm(v, e);
  if (r == 0.0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  if (g == e) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out[i] = std::pow(std::abs(v[i]), e - 1.0) * sgn(v[i]);
    return;
  }
  const double scale = std::pow(r, g - 1.0);
  if (e == 2.0) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = scale * (v[i] / r);
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = scale * std::pow(std::abs(v[i]) / r, e - 1.0) * sgn(v[i]);
}

}  // namespace

void check_finite(std::span<const double> v, const char* what) {
  for (double c : v)
    if (!std::isfinite(c))
      throw ValidationError(std::string(what) + " has a non-finite coordinate");
}

SpaceSpec SpaceSpec::make(int dim, double s, double p) {
  if (dim < 1) throw ValidationError("dim must be >= 1, got " + std::to_string(dim));
  check_exponent(s, "s");
  check_exponent(p, "p");
  return SpaceSpec{dim, s, p, s / (s - 1.0), p / (p - 1.0)};
}

PrimalPoint::PrimalPoint(std::vector<double> c, const SpaceSpec& sp)
    : coords(std::move(c)), space(sp) {
  if (static_cast<int>(coords.size()) != space.dim)
    throw ShapeError("point has " + std::to_string(coords.size()) +
                     " coordinates, space.dim is " + std::to_string(space.dim));
  check_finite(coords, "point");
}

DualPoint::DualPoint(std::vector<double> c, const SpaceSpec& sp)
    : coords(std::move(c)), space(sp) {
  if (static_cast<int>(coords.size()) != space.dim)
    throw ShapeError("dual point has " + std::to_string(coords.size()) +
                     " coordinates, space.dim is " + std::to_string(space.dim));
  check_finite(coords, "dual point");
}

// Scaled by the max so coordinates near the double range neither overflow
// nor flush to zero inside the power sum.
double lp_norm(std::span<const double> v, double exponent) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  if (exponent == 2.0) {
    for (double c : v) {
      const double t = c / m;
      sum += t * t;
    }
    return m * std::sqrt(sum);
  }
  for (double c : v) sum += std::pow(std::abs(c) / m, exponent);
  return m * std::pow(sum, 1.0 / exponent);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm_primal(const PrimalPoint& x) { return lp_norm(x.coords, x.space.s); }

double norm_dual(const DualPoint& f) { return lp_norm(f.coords, f.space.s_conj); }

double pair(const PrimalPoint& x, const DualPoint& f) {
  if (x.space != f.space)
    throw ShapeError("pairing requires points from the same space");
  return dot(x.coords, f.coords);
}

void duality_map_into(const SpaceSpec& sp, std::span<const double> x, std::span<double> out) {
  gauge_map(x, out, sp.s, sp.p);
}

void inverse_duality_map_into(const SpaceSpec& sp, std::span<const double> f, std::span<double> out) {
  gauge_map(f, out, sp.s_conj, sp.q);
}

DualPoint duality_map(const PrimalPoint& x) {
  std::vector<double> out(x.coords.size());
  duality_map_into(x.space, x.coords, out);
  return DualPoint(std::move(out), x.space);
}

PrimalPoint inverse_duality_map(const DualPoint& f) {
  std::vector<double> out(f.coords.size());
  inverse_duality_map_into(f.space, f.coords, out);
  return PrimalPoint(std::move(out), f.space);
}

double modulus_bound(double space_exponent, double arg, ModulusKind kind) {
  check_exponent(space_exponent, "space_exponent");
  const double e = space_exponent;
  switch (kind) {
    case ModulusKind::smoothness:
      if (!(arg >= 0.0) || !std::isfinite(arg))
        throw DomainError("smoothness argument must be >= 0, got " + std::to_string(arg));
      return e < 2.0 ? std::pow(arg, e) / e : 0.5 * (e - 1.0) * arg * arg;
    case ModulusKind::convexity:
      if (!(arg > 0.0) || !(arg <= 2.0))
        throw DomainError("convexity argument must lie in (0, 2], got " + std::to_string(arg));
      return e < 2.0 ? arg * arg / std::pow(2.0, e + 1.0) : std::pow(arg, e);
  }
  throw ValidationError("unknown modulus kind");
}

}  // namespace lpmono
