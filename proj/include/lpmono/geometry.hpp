#pragma once

#include <span>
#include <vector>

#include "lpmono/errors.hpp"

namespace lpmono {

// A finite-dimensional l_s space together with the gauge exponent p of its
// duality map. s_conj and q are the conjugate exponents; the dual space is
// l_{s_conj} with gauge q.
struct SpaceSpec {
  int dim = 1;
  double s = 2.0;
  double p = 2.0;
  double s_conj = 2.0;
  double q = 2.0;

  static SpaceSpec make(int dim, double s, double p = 2.0);

  // The dual space: swapped norm exponent and gauge.
  SpaceSpec dual() const { return SpaceSpec{dim, s_conj, q, s, p}; }

  bool hilbert() const { return s == 2.0 && p == 2.0; }

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

struct PrimalPoint {
  std::vector<double> coords;
  SpaceSpec space;

  PrimalPoint(std::vector<double> c, const SpaceSpec& sp);

  friend bool operator==(const PrimalPoint&, const PrimalPoint&) = default;
};

struct DualPoint {
  std::vector<double> coords;
  SpaceSpec space;

  DualPoint(std::vector<double> c, const SpaceSpec& sp);

  friend bool operator==(const DualPoint&, const DualPoint&) = default;
};

double norm_primal(const PrimalPoint& x);
double norm_dual(const DualPoint& f);
double pair(const PrimalPoint& x, const DualPoint& f);

// J_p on l_s^n: J(x) = ||x||_s^{p-s} w with w_i = |x_i|^{s-1} sign(x_i),
// J(0) = 0. Satisfies <x, Jx> = ||x||^p and ||Jx||_{s'} = ||x||^{p-1}.
DualPoint duality_map(const PrimalPoint& x);

// J_p^{-1}, realized as the gauge-q duality map of the dual space.
PrimalPoint inverse_duality_map(const DualPoint& f);

enum class ModulusKind { smoothness, convexity };

// The displayed l_p bounds: smoothness rho(tau) <= tau^e/e (1<e<2),
// ((e-1)/2) tau^2 (e>=2); convexity delta(eps) >= eps^2/2^{e+1} (1<e<2),
// eps^e (e>=2).
double modulus_bound(double space_exponent, double arg, ModulusKind kind);

// Allocation-free kernels used by the iteration engines. `sp` tells them
// which side they operate on via the exponents passed explicitly.
double lp_norm(std::span<const double> v, double exponent);
double dot(std::span<const double> a, std::span<const double> b);
void duality_map_into(const SpaceSpec& sp, std::span<const double> x, std::span<double> out);
void inverse_duality_map_into(const SpaceSpec& sp, std::span<const double> f, std::span<double> out);

void check_finite(std::span<const double> v, const char* what);

}  // namespace lpmono
