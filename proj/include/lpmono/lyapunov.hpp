#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpmono/geometry.hpp"

namespace lpmono {

// phi(x,y) = ||x||^2 - 2<x, J_2 y> + ||y||^2 with the gauge-2 duality map,
// whatever gauge the space itself carries. Equals ||x-y||^2 when s = 2.
double phi(const PrimalPoint& x, const PrimalPoint& y);

// phi_p(x,y) = (p/q)||x||^q - p<x, J_p y> + ||y||^p. Coincides with phi for
// p = 2; for p != 2 it is not symmetric and phi_p(x,x) can be negative.
double phi_p(const PrimalPoint& x, const PrimalPoint& y);

// V_p(x, f) = (p/q)||x||^q - p<x, f> + ||f||_{s'}^p.
double v_p(const PrimalPoint& x, const DualPoint& f);

// Signed margins, >= 0 exactly when the audited inequality holds.
// phi_bounds: min over the two bounds | ||x||-||y|| |^p <= phi_p <= (||x||+||y||)^p.
double margin_phi_bounds(const PrimalPoint& x, const PrimalPoint& y);
// ball_bound: ||x-y||^p - phi_p(x,y) + (p/q)||x||^q.
double margin_ball_bound(const PrimalPoint& x, const PrimalPoint& y);
// vp_shift: V_p(x, f+g) - V_p(x, f) - p<J^{-1}f - x, g>.
double margin_vp_shift(const PrimalPoint& x, const DualPoint& f, const DualPoint& g);
// three_point: phi_p(y,x) - phi_p(y,z) - p<z-y, Jx - Jz>.
double margin_three_point(const PrimalPoint& x, const PrimalPoint& y, const PrimalPoint& z);

enum class Inequality { phi_bounds, ball_bound, vp_shift, three_point };

std::string inequality_name(Inequality ineq);
std::optional<Inequality> inequality_from_name(const std::string& name);

// Margins more negative than this count as violations; anything closer to
// zero is attributed to rounding.
inline constexpr double kViolationTol = 1e-12;

struct AuditWitness {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> points;
  double margin = 0.0;
  std::uint64_t sample_index = 0;
};

struct AuditReport {
  Inequality inequality = Inequality::phi_bounds;
  SpaceSpec space;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  // Most negative violating margin; 0 when there are no violations.
  double worst_margin = 0.0;
  // The minimum-margin sample seen, violating or not.
  std::optional<AuditWitness> witness;
  std::uint64_t seed = 0;
  std::optional<double> ball_radius;

  nlohmann::json to_json() const;
};

// Each auditor draws `samples` deterministic samples from (seed, index)
// substreams, evaluates the margin, and tallies violations. Known
// counterexample fixtures are forced in at the head of the sample stream
// when the space dimension admits them.
AuditReport audit_phi_bounds(const SpaceSpec& space, std::uint64_t samples, std::uint64_t seed);
AuditReport audit_ball_bound(const SpaceSpec& space, double d, std::uint64_t samples, std::uint64_t seed);
AuditReport audit_vp_shift(const SpaceSpec& space, std::uint64_t samples, std::uint64_t seed);
AuditReport audit_three_point(const SpaceSpec& space, std::uint64_t samples, std::uint64_t seed);

}  // namespace lpmono
