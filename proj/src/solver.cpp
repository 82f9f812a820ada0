#include "lpmono/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "format.hpp"
#include "lpmono/lyapunov.hpp"

namespace lpmono {

using internal::fmt_g;

Schedule Schedule::prototype(double a, double b) {
  if (!std::isfinite(a) || a <= 0.0)
    throw ValidationError("prototype exponent a must be > 0 so lambda_n = (n+1)^-a lies in (0,1), got " +
                          fmt_g(a));
  if (!std::isfinite(b) || b <= 0.0)
    throw ValidationError("prototype exponent b must be > 0 so theta_n = (n+1)^-b lies in (0,1), got " +
                          fmt_g(b));
  Schedule s;
  s.prototype_ = true;
  s.a_ = a;
  s.b_ = b;
  return s;
}

Schedule Schedule::explicit_seqs(std::vector<double> lambda, std::vector<double> theta) {
  if (lambda.empty()) throw ValidationError("explicit schedule needs at least one lambda value");
  for (double v : lambda)
    if (!(v > 0.0 && v < 1.0))
      throw ValidationError("lambda values must lie in (0,1), got " + fmt_g(v));
  if (!theta.empty()) {
    if (theta.size() != lambda.size())
      throw ShapeError("theta has " + std::to_string(theta.size()) + " entries, lambda has " +
                       std::to_string(lambda.size()));
    for (double v : theta)
      if (!(v > 0.0 && v < 1.0))
        throw ValidationError("theta values must lie in (0,1), got " + fmt_g(v));
    for (std::size_t i = 1; i < theta.size(); ++i)
      if (theta[i] > theta[i - 1])
        throw ValidationError("theta must be nonincreasing; it rises at position " +
                              std::to_string(i + 1));
  }
  Schedule s;
  s.prototype_ = false;
  s.lambda_ = std::move(lambda);
  s.theta_ = std::move(theta);
  return s;
}

double Schedule::a() const {
  if (!prototype_) throw ValidationError("explicit schedule has no exponent a");
  return a_;
}

double Schedule::b() const {
  if (!prototype_) throw ValidationError("explicit schedule has no exponent b");
  return b_;
}

std::uint64_t Schedule::explicit_length() const {
  if (prototype_) throw ValidationError("prototype schedule has no explicit length");
  return lambda_.size();
}

double Schedule::lambda(std::uint64_t n) const {
  if (n < 1) throw ValidationError("schedule index n must be >= 1");
  if (prototype_) return std::pow(static_cast<double>(n) + 1.0, -a_);
  if (n > lambda_.size())
    throw RangeError("schedule index " + std::to_string(n) + " past explicit length " +
                     std::to_string(lambda_.size()));
  return lambda_[n - 1];
}

double Schedule::theta(std::uint64_t n) const {
  if (n < 1) throw ValidationError("schedule index n must be >= 1");
  if (prototype_) return std::pow(static_cast<double>(n) + 1.0, -b_);
  if (theta_.empty()) throw ValidationError("explicit schedule has no theta sequence");
  if (n > theta_.size())
    throw RangeError("schedule index " + std::to_string(n) + " past explicit length " +
                     std::to_string(theta_.size()));
  return theta_[n - 1];
}

std::pair<double, double> schedule_values(const Schedule& sched, std::uint64_t n) {
  return {sched.lambda(n), sched.theta(n)};
}

std::string ScheduleValidation::failure_summary() const {
  std::string out;
  for (const ScheduleCheck& c : checks) {
    if (c.ok) continue;
    if (!out.empty()) out += "; ";
    out += c.condition + ": " + c.detail;
  }
  return out;
}

namespace {

// Decay exponent e fitted to v_n ~ n^-e between the horizon midpoint and end.
double fitted_decay(const Schedule& sched, std::uint64_t H, bool of_theta, bool squared,
                    bool product) {
  const std::uint64_t mid = std::max<std::uint64_t>(1, H / 2);
  if (mid == H) return 0.0;
  auto value = [&](std::uint64_t n) {
    double v = of_theta ? sched.theta(n) : sched.lambda(n);
    if (squared) v *= v;
    if (product) v *= sched.theta(n);
    return v;
  };
  return std::log(value(mid) / value(H)) /
         std::log(static_cast<double>(H) / static_cast<double>(mid));
}

double ratio_statistic(const Schedule& sched, std::uint64_t n) {
  return (sched.theta(n - 1) / sched.theta(n) - 1.0) / (sched.lambda(n) * sched.theta(n));
}

}  // namespace

ScheduleValidation validate_schedule(const Schedule& sched, std::uint64_t horizon,
                                     bool require_theta) {
  if (horizon < 2) throw ValidationError("horizon must be >= 2");
  ScheduleValidation v;
  auto add = [&](std::string cond, bool ok, std::string detail) {
    v.valid = v.valid && ok;
    v.checks.push_back(ScheduleCheck{std::move(cond), ok, std::move(detail)});
  };

  if (sched.is_prototype()) {
    const double a = sched.a();
    const double b = sched.b();
    add("lambda_range", a > 0.0,
        "lambda_n = (n+1)^-a lies in (0,1) iff a > 0; a = " + fmt_g(a));
    add("lambda_square_summable", a > 0.5,
        "sum of lambda_n^2 must be finite, which requires a > 1/2; a = " + fmt_g(a));
    if (require_theta) {
      add("theta_decreasing_to_zero", b > 0.0,
          "theta_n = (n+1)^-b must decrease to 0, which requires b > 0; b = " + fmt_g(b));
      add("theta_dominates_lambda", b < a,
          "theta must vanish more slowly than lambda, which requires b < a; a = " + fmt_g(a) +
              ", b = " + fmt_g(b));
      add("lambda_theta_sum_divergent", a + b <= 1.0,
          "sum of lambda_n*theta_n must diverge, which requires a + b <= 1; a + b = " +
              fmt_g(a + b));
      add("ratio_condition", a + b < 1.0,
          "((theta_{n-1}/theta_n) - 1)/(lambda_n*theta_n) must tend to 0, which requires "
          "a + b < 1; a + b = " + fmt_g(a + b));
    } else {
      add("lambda_sum_divergent", a <= 1.0,
          "sum of lambda_n must diverge, which requires a <= 1; a = " + fmt_g(a));
    }
    return v;
  }

  // Explicit sequences: finite-horizon heuristics. Asymptotics cannot be
  // decided from a finite prefix; these fit a power-law decay exponent to the
  // observed tail and test the p-series thresholds.
  const std::uint64_t H = std::min<std::uint64_t>(horizon, sched.explicit_length());
  add("lambda_range", true, "explicit lambda values lie in (0,1) by construction");
  {
    const double e2 = fitted_decay(sched, H, false, true, false);
    add("lambda_square_summable", e2 > 1.0,
        "sum of lambda_n^2 must be finite; fitted decay exponent of lambda_n^2 over the horizon "
        "is " + fmt_g(e2) + ", needs > 1");
  }
  if (require_theta) {
    if (!sched.has_theta()) {
      add("theta_decreasing_to_zero", false, "schedule has no theta sequence");
      return v;
    }
    const double t1 = sched.theta(1);
    const double tH = sched.theta(H);
    add("theta_decreasing_to_zero", tH < t1,
        "theta must decrease toward 0; over the horizon it went from " + fmt_g(t1) + " to " +
            fmt_g(tH));
    const double ep = fitted_decay(sched, H, false, false, true);
    add("lambda_theta_sum_divergent", ep <= 1.0 + 1e-9,
        "sum of lambda_n*theta_n must diverge; fitted decay exponent over the horizon is " +
            fmt_g(ep) + ", needs <= 1");
    const std::uint64_t early = std::max<std::uint64_t>(2, H / 4);
    const double cE = ratio_statistic(sched, early);
    const double cH = ratio_statistic(sched, H);
    add("ratio_condition", cH <= cE + 1e-12 && cH < 1.0,
        "((theta_{n-1}/theta_n) - 1)/(lambda_n*theta_n) must tend to 0; it moved from " +
            fmt_g(cE) + " to " + fmt_g(cH) + " over the horizon");
  } else {
    const double e1 = fitted_decay(sched, H, false, false, false);
    add("lambda_sum_divergent", e1 <= 1.0 + 1e-9,
        "sum of lambda_n must diverge; fitted decay exponent over the horizon is " + fmt_g(e1) +
            ", needs <= 1");
  }
  return v;
}

std::string scheme_name(SchemeKind scheme) {
  switch (scheme) {
    case SchemeKind::regularized: return "regularized";
    case SchemeKind::unregularized: return "unregularized";
    case SchemeKind::accretive: return "accretive";
    case SchemeKind::mann: return "mann";
  }
  return "unknown";
}

std::optional<SchemeKind> scheme_from_name(const std::string& name) {
  if (name == "regularized") return SchemeKind::regularized;
  if (name == "unregularized") return SchemeKind::unregularized;
  if (name == "accretive") return SchemeKind::accretive;
  if (name == "mann") return SchemeKind::mann;
  return std::nullopt;
}

namespace {

// Residuals past this are declared divergent rather than letting the iterate
// run into the double range.
constexpr double kDivergenceCeiling = 1e150;

struct StepBuffers {
  std::vector<double> jx, g, h;
  explicit StepBuffers(int dim) : jx(dim), g(dim), h(dim) {}
};

bool uses_theta(SchemeKind scheme) {
  return scheme == SchemeKind::regularized || scheme == SchemeKind::accretive;
}

// One update x -> out with ax = A(x) already evaluated. jx1 = J(x1).
void scheme_step(SchemeKind scheme, const SpaceSpec& sp, std::span<const double> x,
                 std::span<const double> ax, double lam, double th, std::span<const double> x1,
                 std::span<const double> jx1, StepBuffers& buf, std::span<double> out) {
  const int dim = sp.dim;
  switch (scheme) {
    case SchemeKind::regularized:
    case SchemeKind::unregularized: {
      duality_map_into(sp, x, buf.jx);
      bool at_rest = true;
      for (int i = 0; i < dim; ++i) {
        buf.g[i] = ax[i] + th * (buf.jx[i] - jx1[i]);
        at_rest = at_rest && buf.g[i] == 0.0;
      }
      // Zero dual increment: skip the J round trip so exact fixed points
      // stay exact in every space, not just Hilbert.
      if (at_rest) {
        std::copy(x.begin(), x.end(), out.begin());
        return;
      }
      for (int i = 0; i < dim; ++i) buf.h[i] = buf.jx[i] - lam * buf.g[i];
      inverse_duality_map_into(sp, buf.h, out);
      return;
    }
    case SchemeKind::accretive:
      for (int i = 0; i < dim; ++i) out[i] = x[i] - lam * ax[i] - lam * th * (x[i] - x1[i]);
      return;
    case SchemeKind::mann:
      for (int i = 0; i < dim; ++i) out[i] = (1.0 - lam) * x[i] + lam * (x[i] - ax[i]);
      return;
  }
}

RunTrace finalize_diverged(const RunTrace& trace, const std::vector<double>& x, std::uint64_t n,
                           double residual) {
  RunTrace out = trace;
  out.final_iterate = x;
  out.iterations = n;
  out.final_residual = residual;
  return out;
}

RunTrace run_kernel(const MonotoneOperator& A, const Schedule& sched, const SolveConfig& cfg,
                    SchemeKind scheme) {
  const SpaceSpec& sp = A.space;
  if ((scheme == SchemeKind::accretive || scheme == SchemeKind::mann) && !sp.hilbert())
    throw ValidationError(scheme_name(scheme) +
                          " scheme requires the Hilbert configuration s = 2, gauge p = 2");
  if (cfg.max_iter < 1) throw ValidationError("max_iter must be >= 1");
  if (cfg.record_every < 1) throw ValidationError("record_every must be >= 1");
  if (!(cfg.target_residual >= 0.0)) throw ValidationError("target_residual must be >= 0");
  if (static_cast<int>(cfg.x1.size()) != sp.dim)
    throw ShapeError("x1 has length " + std::to_string(cfg.x1.size()) + ", space.dim is " +
                     std::to_string(sp.dim));
  check_finite(cfg.x1, "x1");
  const bool use_theta = uses_theta(scheme);
  if (use_theta && !sched.has_theta())
    throw ValidationError(scheme_name(scheme) + " scheme requires a theta sequence");
  if (!sched.is_prototype() && cfg.max_iter > sched.explicit_length())
    throw ValidationError("max_iter " + std::to_string(cfg.max_iter) +
                          " exceeds the explicit schedule length " +
                          std::to_string(sched.explicit_length()));

  RunTrace trace;
  trace.space = sp;
  trace.scheme = scheme;
  trace.anchor = cfg.x1;

  const std::optional<PrimalPoint> xstar =
      A.known_zero ? std::optional<PrimalPoint>(PrimalPoint(*A.known_zero, sp)) : std::nullopt;

  StepBuffers buf(sp.dim);
  std::vector<double> x = cfg.x1;
  std::vector<double> xnext(sp.dim), ax(sp.dim), diff(sp.dim), jx1(sp.dim);
  duality_map_into(sp, cfg.x1, jx1);
  double last_finite_residual = 0.0;

  for (std::uint64_t n = 1;; ++n) {
    const double lam = sched.lambda(n);
    const double th = use_theta ? sched.theta(n) : 0.0;
    A.apply_into(x, ax);
    const double residual = lp_norm(ax, sp.s_conj);
    if (!std::isfinite(residual))
      throw DivergenceError("operator value became non-finite at n = " + std::to_string(n),
                            finalize_diverged(trace, x, n, last_finite_residual));
    if (residual > kDivergenceCeiling)
      throw DivergenceError("residual exceeded " + internal::fmt_g(kDivergenceCeiling) +
                                " at n = " + std::to_string(n) + "; the iteration is diverging",
                            finalize_diverged(trace, x, n, residual));
    last_finite_residual = residual;

    scheme_step(scheme, sp, x, ax, lam, th, cfg.x1, jx1, buf, xnext);
    bool finite = true;
    for (double c : xnext) finite = finite && std::isfinite(c);
    if (!finite)
      throw DivergenceError("iterate became non-finite at n = " + std::to_string(n + 1),
                            finalize_diverged(trace, x, n, residual));

    const bool stop = residual <= cfg.target_residual || n >= cfg.max_iter;
    if ((n - 1) % cfg.record_every == 0 || stop) {
      for (int i = 0; i < sp.dim; ++i) diff[i] = xnext[i] - x[i];
      TraceRow row;
      row.n = n;
      row.lambda = lam;
      row.theta = th;
      row.residual = residual;
      row.step_size = lp_norm(diff, sp.s);
      row.iterate = x;
      if (xstar) {
        for (int i = 0; i < sp.dim; ++i) diff[i] = x[i] - xstar->coords[i];
        const double err = lp_norm(diff, sp.s);
        if (std::isfinite(err)) row.err = err;
        const double ps = phi_p(*xstar, PrimalPoint(x, sp));
        if (std::isfinite(ps)) row.phi_star = ps;
      }
      trace.rows.push_back(std::move(row));
    }
    if (stop) {
      trace.final_iterate = x;
      trace.iterations = n;
      trace.final_residual = residual;
      return trace;
    }
    std::swap(x, xnext);
  }
}

}  // namespace

RunTrace run_regularized(const MonotoneOperator& A, const Schedule& sched, const SolveConfig& cfg) {
  return run_kernel(A, sched, cfg, SchemeKind::regularized);
}

RunTrace run_unregularized(const MonotoneOperator& A, const Schedule& sched,
                           const SolveConfig& cfg) {
  return run_kernel(A, sched, cfg, SchemeKind::unregularized);
}

RunTrace run_accretive_hilbert(const MonotoneOperator& A, const Schedule& sched,
                               const SolveConfig& cfg) {
  return run_kernel(A, sched, cfg, SchemeKind::accretive);
}

RunTrace run_mann(const MonotoneOperator& A, const Schedule& sched, const SolveConfig& cfg) {
  return run_kernel(A, sched, cfg, SchemeKind::mann);
}

RunTrace run_scheme(SchemeKind scheme, const MonotoneOperator& A, const Schedule& sched,
                    const SolveConfig& cfg) {
  return run_kernel(A, sched, cfg, scheme);
}

namespace {

ResolventResult solve_resolvent_from(const MonotoneOperator& A, double theta,
                                     const std::vector<double>& x1, std::vector<double> y,
                                     double tol) {
  const SpaceSpec& sp = A.space;
  const int dim = sp.dim;
  if (!(theta > 0.0)) throw ValidationError("theta must be > 0, got " + fmt_g(theta));
  if (!(tol > 0.0)) throw ValidationError("resolvent tolerance must be > 0, got " + fmt_g(tol));
  if (static_cast<int>(x1.size()) != dim)
    throw ShapeError("x1 has length " + std::to_string(x1.size()) + ", space.dim is " +
                     std::to_string(dim));
  check_finite(x1, "x1");

  std::vector<double> jx1(dim), jy(dim), ay(dim);
  duality_map_into(sp, x1, jx1);
  auto eval = [&](const std::vector<double>& yv, std::vector<double>& out) {
    duality_map_into(sp, yv, jy);
    A.apply_fn(yv, out);
    for (int i = 0; i < dim; ++i) out[i] = theta * (jy[i] - jx1[i]) + out[i];
  };

  std::vector<double> fy(dim), ftrial(dim), ytrial(dim), ypert(dim), fp(dim), fm(dim), dvec(dim);
  eval(y, fy);
  double res = lp_norm(fy, sp.s_conj);
  ResolventResult best{y, theta, res, 0};

  Eigen::MatrixXd jac(dim, dim);
  Eigen::VectorXd rhs(dim);

  for (std::uint64_t iter = 0; iter < 50; ++iter) {
    if (res <= tol) return ResolventResult{std::move(y), theta, res, iter};

    const double h = 1e-6 * (1.0 + lp_norm(y, sp.s));
    for (int j = 0; j < dim; ++j) {
      ypert = y;
      ypert[j] = y[j] + h;
      eval(ypert, fp);
      ypert[j] = y[j] - h;
      eval(ypert, fm);
      for (int i = 0; i < dim; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    for (int i = 0; i < dim; ++i) rhs(i) = -fy[i];
    Eigen::VectorXd delta = jac.partialPivLu().solve(rhs);
    if (!delta.allFinite())
      throw NoConvergenceError("Newton linear solve produced a non-finite step at iteration " +
                                   std::to_string(iter + 1) + " (theta = " + fmt_g(theta) + ")",
                               best);
    for (int i = 0; i < dim; ++i) dvec[i] = delta(i);
    const double dnorm = lp_norm(dvec, sp.s);

    double t = 1.0;
    while (true) {
      if (t * dnorm < 1e-14)
        throw NoConvergenceError("Newton stagnated at iteration " + std::to_string(iter + 1) +
                                     ": step below 1e-14 with residual " + fmt_g(res),
                                 best);
      for (int i = 0; i < dim; ++i) ytrial[i] = y[i] + t * dvec[i];
      eval(ytrial, ftrial);
      const double rtrial = lp_norm(ftrial, sp.s_conj);
      if (std::isfinite(rtrial) && rtrial < res) {
        y.swap(ytrial);
        fy.swap(ftrial);
        res = rtrial;
        break;
      }
      t *= 0.5;
    }
    if (res < best.residual) best = ResolventResult{y, theta, res, iter + 1};
  }
  if (res <= tol) return ResolventResult{std::move(y), theta, res, 50};
  throw NoConvergenceError("Newton did not reach tolerance " + fmt_g(tol) +
                               " within 50 iterations; best residual " + fmt_g(best.residual),
                           best);
}

}  // namespace

ResolventResult solve_resolvent(const MonotoneOperator& A, double theta,
                                const std::vector<double>& x1, double tol) {
  return solve_resolvent_from(A, theta, x1, x1, tol);
}

std::vector<ResolventResult> regularization_path(const MonotoneOperator& A,
                                                 const std::vector<double>& thetas,
                                                 const std::vector<double>& x1, double tol) {
  std::vector<ResolventResult> results;
  results.reserve(thetas.size());
  std::vector<double> warm = x1;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    try {
      ResolventResult r = solve_resolvent_from(A, thetas[k], x1, warm, tol);
      warm = r.y;
      results.push_back(std::move(r));
    } catch (const NoConvergenceError& e) {
      throw PathError("resolvent solve failed at path point " + std::to_string(k + 1) +
                          " (theta = " + fmt_g(thetas[k]) + "): " + e.what(),
                      std::move(results), k, e.best);
    }
  }
  return results;
}

std::vector<ResolventResult> regularization_path(const MonotoneOperator& A, const Schedule& sched,
                                                 const std::vector<double>& x1,
                                                 std::uint64_t n_points, double tol) {
  if (n_points < 1) throw ValidationError("n_points must be >= 1");
  if (!sched.has_theta())
    throw ValidationError("regularization path requires a schedule with theta");
  std::vector<double> thetas(n_points);
  for (std::uint64_t n = 1; n <= n_points; ++n) thetas[n - 1] = sched.theta(n);
  return regularization_path(A, thetas, x1, tol);
}

XuCheckReport check_xu_recursion(std::span<const double> a, std::span<const double> alpha,
                                 std::span<const double> sigma, std::span<const double> gamma) {
  if (a.size() < 2) throw ShapeError("a must have at least 2 entries");
  const std::size_t m = a.size() - 1;
  if (alpha.size() != m || sigma.size() != m || gamma.size() != m)
    throw ShapeError("coefficient sequences must have length(a) - 1 = " + std::to_string(m) +
                     " entries");
  for (double v : a)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ShapeError("a entries must be finite and >= 0");
  for (double v : alpha)
    if (!(v > 0.0 && v < 1.0)) throw ShapeError("alpha entries must lie in (0,1)");
  for (double v : sigma)
    if (!std::isfinite(v)) throw ShapeError("sigma entries must be finite");
  for (double v : gamma)
    if (!(v >= 0.0) || !std::isfinite(v)) throw ShapeError("gamma entries must be finite and >= 0");

  XuCheckReport rep;
  rep.checks = m;
  for (std::size_t i = 0; i < m; ++i) {
    const double bound = (1.0 - alpha[i]) * a[i] + alpha[i] * sigma[i] + gamma[i];
    const double excess = a[i + 1] - bound;
    if (excess > 1e-12) {
      rep.violations.push_back(i + 1);
      rep.worst_excess = std::max(rep.worst_excess, excess);
    }
  }
  return rep;
}

void track_diagnostics(RunTrace& trace, const MonotoneOperator& A,
                       const std::vector<ResolventResult>* path) {
  const SpaceSpec& sp = trace.space;
  if (A.space != sp) throw ShapeError("operator space does not match trace space");
  if (path && path->size() != trace.rows.size())
    throw ShapeError("path has " + std::to_string(path->size()) + " points, trace has " +
                     std::to_string(trace.rows.size()) + " rows");

  const std::optional<PrimalPoint> xstar =
      A.known_zero ? std::optional<PrimalPoint>(PrimalPoint(*A.known_zero, sp)) : std::nullopt;
  const PrimalPoint anchor(trace.anchor, sp);
  if (xstar) {
    const double r1 = phi_p(*xstar, anchor);
    const double r2 = (4.0 * sp.p / sp.q) * std::pow(norm_primal(*xstar), sp.q);
    trace.radius_estimate = std::max(r1, r2);
  }

  StepBuffers buf(sp.dim);
  std::vector<double> jx1(sp.dim), ax(sp.dim), xnext(sp.dim), diff(sp.dim);
  duality_map_into(sp, trace.anchor, jx1);

  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    TraceRow& row = trace.rows[k];
    const PrimalPoint xk(row.iterate, sp);
    if (xstar) {
      for (int i = 0; i < sp.dim; ++i) diff[i] = row.iterate[i] - xstar->coords[i];
      row.err = lp_norm(diff, sp.s);
      row.phi_star = phi_p(*xstar, xk);
    }
    if (path) {
      const ResolventResult& r = (*path)[k];
      if (r.theta != row.theta)
        throw ShapeError("path theta " + fmt_g(r.theta) + " does not match trace theta " +
                         fmt_g(row.theta) + " at row " + std::to_string(k + 1));
      row.phi_track = phi_p(PrimalPoint(r.y, sp), xk);
    }

    // The psi-monitor is the step the scheme would take from this row's
    // iterate; by construction it must reproduce the recorded step_size.
    A.apply_fn(row.iterate, ax);
    scheme_step(trace.scheme, sp, row.iterate, ax, row.lambda, row.theta, trace.anchor, jx1, buf,
                xnext);
    for (int i = 0; i < sp.dim; ++i) diff[i] = xnext[i] - row.iterate[i];
    const double monitor = lp_norm(diff, sp.s);
    if (std::abs(monitor - row.step_size) > 1e-12)
      throw Error("step monitor " + fmt_g(monitor) + " disagrees with recorded step_size " +
                  fmt_g(row.step_size) + " at row " + std::to_string(k + 1));
  }
}

}  // namespace lpmono
