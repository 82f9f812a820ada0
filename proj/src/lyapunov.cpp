#include "lpmono/lyapunov.hpp"

#include <cmath>

#include "lpmono/rng.hpp"
#include "sampling.hpp"

namespace lpmono {

using internal::draw_cube;

namespace {

void require_same_space(const SpaceSpec& a, const SpaceSpec& b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + " requires arguments from the same space");
}

std::vector<double> gauge2_map(const PrimalPoint& y) {
  SpaceSpec sp2 = y.space;
  sp2.p = 2.0;
  sp2.q = 2.0;
  std::vector<double> out(y.coords.size());
  duality_map_into(sp2, y.coords, out);
  return out;
}

struct AuditTally {
  AuditReport report;
  double min_margin = 0.0;
  bool seen = false;

  void add(double margin, std::vector<std::string> labels,
           std::vector<std::vector<double>> points, std::uint64_t index) {
    if (!seen || margin < min_margin) {
      seen = true;
      min_margin = margin;
      report.witness = AuditWitness{std::move(labels), std::move(points), margin, index};
    }
    if (margin < -kViolationTol) {
      report.violations += 1;
      if (margin < report.worst_margin) report.worst_margin = margin;
    }
  }
};

AuditTally make_tally(Inequality ineq, const SpaceSpec& sp, std::uint64_t samples,
                      std::uint64_t seed) {
  if (samples < 1) throw ValidationError("samples must be >= 1");
  AuditTally t;
  t.report.inequality = ineq;
  t.report.space = sp;
  t.report.samples = samples;
  t.report.seed = seed;
  return t;
}

}  // namespace

double phi(const PrimalPoint& x, const PrimalPoint& y) {
  require_same_space(x.space, y.space, "phi");
  const double nx = norm_primal(x);
  const double ny = norm_primal(y);
  return nx * nx - 2.0 * dot(x.coords, gauge2_map(y)) + ny * ny;
}

double phi_p(const PrimalPoint& x, const PrimalPoint& y) {
  require_same_space(x.space, y.space, "phi_p");
  const SpaceSpec& sp = x.space;
  std::vector<double> jy(y.coords.size());
  duality_map_into(sp, y.coords, jy);
  return (sp.p / sp.q) * std::pow(norm_primal(x), sp.q) - sp.p * dot(x.coords, jy) +
         std::pow(norm_primal(y), sp.p);
}

double v_p(const PrimalPoint& x, const DualPoint& f) {
  require_same_space(x.space, f.space, "v_p");
  const SpaceSpec& sp = x.space;
  return (sp.p / sp.q) * std::pow(norm_primal(x), sp.q) - sp.p * dot(x.coords, f.coords) +
         std::pow(norm_dual(f), sp.p);
}

double margin_phi_bounds(const PrimalPoint& x, const PrimalPoint& y) {
  const double p = x.space.p;
  const double nx = norm_primal(x);
  const double ny = norm_primal(y);
  const double v = phi_p(x, y);
  const double lower = std::pow(std::abs(nx - ny), p);
  const double upper = std::pow(nx + ny, p);
  return std::min(v - lower, upper - v);
}

double margin_ball_bound(const PrimalPoint& x, const PrimalPoint& y) {
  const SpaceSpec& sp = x.space;
  std::vector<double> diff(x.coords.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = x.coords[i] - y.coords[i];
  const double lhs = std::pow(lp_norm(diff, sp.s), sp.p);
  const double rhs = phi_p(x, y) - (sp.p / sp.q) * std::pow(norm_primal(x), sp.q);
  return lhs - rhs;
}

double margin_vp_shift(const PrimalPoint& x, const DualPoint& f, const DualPoint& g) {
  require_same_space(f.space, g.space, "margin_vp_shift");
  const SpaceSpec& sp = x.space;
  const PrimalPoint jf = inverse_duality_map(f);
  std::vector<double> delta(jf.coords.size());
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = jf.coords[i] - x.coords[i];
  const double lhs = v_p(x, f) + sp.p * dot(delta, g.coords);
  std::vector<double> shifted(f.coords.size());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = f.coords[i] + g.coords[i];
  const double rhs = v_p(x, DualPoint(std::move(shifted), sp));
  return rhs - lhs;
}

double margin_three_point(const PrimalPoint& x, const PrimalPoint& y, const PrimalPoint& z) {
  require_same_space(x.space, z.space, "margin_three_point");
  const SpaceSpec& sp = x.space;
  std::vector<double> jx(sp.dim), jz(sp.dim), dzy(sp.dim), dj(sp.dim);
  duality_map_into(sp, x.coords, jx);
  duality_map_into(sp, z.coords, jz);
  for (int i = 0; i < sp.dim; ++i) {
    dzy[i] = z.coords[i] - y.coords[i];
    dj[i] = jx[i] - jz[i];
  }
  const double lhs = phi_p(y, x) - phi_p(y, z);
  const double rhs = sp.p * dot(dzy, dj);
  return lhs - rhs;
}

std::string inequality_name(Inequality ineq) {
  switch (ineq) {
    case Inequality::phi_bounds: return "phi_bounds";
    case Inequality::ball_bound: return "ball_bound";
    case Inequality::vp_shift: return "vp_shift";
    case Inequality::three_point: return "three_point";
  }
  return "unknown";
}

std::optional<Inequality> inequality_from_name(const std::string& name) {
  if (name == "phi_bounds") return Inequality::phi_bounds;
  if (name == "ball_bound") return Inequality::ball_bound;
  if (name == "vp_shift") return Inequality::vp_shift;
  if (name == "three_point") return Inequality::three_point;
  return std::nullopt;
}

AuditReport audit_phi_bounds(const SpaceSpec& space, std::uint64_t samples, std::uint64_t seed) {
  AuditTally t = make_tally(Inequality::phi_bounds, space, samples, seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::vector<double> xc, yc;
    if (i == 0 && space.dim == 2) {
      xc = {0.5, 0.0};
      yc = {0.5, 0.0};
    } else {
      SplitMix64 g = substream(seed, i);
      xc = draw_cube(g, space.dim, 2.0);
      yc = draw_cube(g, space.dim, 2.0);
    }
    const double m = margin_phi_bounds(PrimalPoint(xc, space), PrimalPoint(yc, space));
    t.add(m, {"x", "y"}, {std::move(xc), std::move(yc)}, i);
  }
  return t.report;
}

AuditReport audit_ball_bound(const SpaceSpec& space, double d, std::uint64_t samples,
                             std::uint64_t seed) {
  if (!(d > 0.0)) throw ValidationError("ball radius d must be > 0");
  AuditTally t = make_tally(Inequality::ball_bound, space, samples, seed);
  t.report.ball_radius = d;
  for (std::uint64_t i = 0; i < samples; ++i) {
    SplitMix64 g = substream(seed, i);
    std::vector<double> xc = internal::draw_ball_reject(g, space, d);
    std::vector<double> yc = internal::draw_ball_reject(g, space, d);
    const double m = margin_ball_bound(PrimalPoint(xc, space), PrimalPoint(yc, space));
    t.add(m, {"x", "y"}, {std::move(xc), std::move(yc)}, i);
  }
  return t.report;
}

AuditReport audit_vp_shift(const SpaceSpec& space, std::uint64_t samples, std::uint64_t seed) {
  AuditTally t = make_tally(Inequality::vp_shift, space, samples, seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    SplitMix64 g = substream(seed, i);
    std::vector<double> xc = draw_cube(g, space.dim, 2.0);
    std::vector<double> fc = draw_cube(g, space.dim, 2.0);
    std::vector<double> gc = draw_cube(g, space.dim, 2.0);
    const double m = margin_vp_shift(PrimalPoint(xc, space), DualPoint(fc, space),
                                     DualPoint(gc, space));
    t.add(m, {"x", "xstar", "ystar"}, {std::move(xc), std::move(fc), std::move(gc)}, i);
  }
  return t.report;
}

AuditReport audit_three_point(const SpaceSpec& space, std::uint64_t samples, std::uint64_t seed) {
  AuditTally t = make_tally(Inequality::three_point, space, samples, seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::vector<double> xc, yc, zc;
    if (i == 0 && space.dim == 1) {
      xc = {2.0};
      yc = {1.0};
      zc = {3.0};
    } else {
      SplitMix64 g = substream(seed, i);
      xc = draw_cube(g, space.dim, 2.0);
      yc = draw_cube(g, space.dim, 2.0);
      zc = draw_cube(g, space.dim, 2.0);
    }
    const double m = margin_three_point(PrimalPoint(xc, space), PrimalPoint(yc, space),
                                        PrimalPoint(zc, space));
    t.add(m, {"x", "y", "z"}, {std::move(xc), std::move(yc), std::move(zc)}, i);
  }
  return t.report;
}

nlohmann::json AuditReport::to_json() const {
  nlohmann::json w;
  if (witness) {
    w["labels"] = witness->labels;
    w["points"] = witness->points;
    w["margin"] = witness->margin;
    w["sample_index"] = witness->sample_index;
    w["dim"] = space.dim;
    w["s"] = space.s;
    w["p"] = space.p;
    if (ball_radius) w["ball_radius"] = *ball_radius;
  }
  return nlohmann::json{{"inequality", inequality_name(inequality)},
                        {"samples", samples},
                        {"violations", violations},
                        {"worst_margin", worst_margin},
                        {"witness", w},
                        {"seed", seed}};
}

}  // namespace lpmono
