#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lpmono/operators.hpp"

namespace lpmono {

// Step-size sequences lambda_n = (n+1)^{-a}, theta_n = (n+1)^{-b}, or
// explicit finite sequences. n is 1-based everywhere.
class Schedule {
 public:
  static Schedule prototype(double a, double b);
  // theta may be empty for schemes that do not regularize.
  static Schedule explicit_seqs(std::vector<double> lambda, std::vector<double> theta = {});

  bool is_prototype() const { return prototype_; }
  double a() const;
  double b() const;
  bool has_theta() const { return prototype_ || !theta_.empty(); }
  std::uint64_t explicit_length() const;

  double lambda(std::uint64_t n) const;
  double theta(std::uint64_t n) const;

 private:
  Schedule() = default;
  bool prototype_ = true;
  double a_ = 0.6;
  double b_ = 0.3;
  std::vector<double> lambda_;
  std::vector<double> theta_;
};

std::pair<double, double> schedule_values(const Schedule& sched, std::uint64_t n);

struct ScheduleCheck {
  std::string condition;
  bool ok = true;
  std::string detail;
};

struct ScheduleValidation {
  bool valid = true;
  std::vector<ScheduleCheck> checks;

  // The failed conditions, joined for error messages.
  std::string failure_summary() const;
};

// Convergence conditions: analytic tests of the exponents for prototype
// schedules, finite-horizon heuristics for explicit ones. require_theta=false
// restricts to the lambda-only conditions of the unregularized scheme.
ScheduleValidation validate_schedule(const Schedule& sched, std::uint64_t horizon,
                                     bool require_theta = true);

struct SolveConfig {
  std::uint64_t max_iter = 1000;
  double target_residual = 1e-10;
  std::uint64_t record_every = 100;
  std::vector<double> x1;
};

struct TraceRow {
  std::uint64_t n = 0;
  double lambda = 0.0;
  double theta = 0.0;
  std::optional<double> err;       // ||x_n - x*||, known zero only
  double residual = 0.0;           // ||A x_n|| in the dual norm
  std::optional<double> phi_star;  // phi_p(x*, x_n), known zero only
  std::optional<double> phi_track; // phi_p(y_n, x_n), filled by track_diagnostics
  double step_size = 0.0;          // ||x_{n+1} - x_n||
  std::vector<double> iterate;     // x_n itself, for diagnostics; not serialized
};

enum class SchemeKind { regularized, unregularized, accretive, mann };

std::string scheme_name(SchemeKind scheme);
std::optional<SchemeKind> scheme_from_name(const std::string& name);

struct RunTrace {
  SpaceSpec space;
  SchemeKind scheme = SchemeKind::regularized;
  std::vector<TraceRow> rows;
  std::vector<double> anchor;
  std::vector<double> final_iterate;
  std::uint64_t iterations = 0;
  double final_residual = 0.0;
  // max(phi_p(x*, x1), (4p/q)||x*||^q), filled by track_diagnostics.
  std::optional<double> radius_estimate;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& msg, RunTrace t) : Error(msg), trace(std::move(t)) {}
  RunTrace trace;
};

struct ResolventResult {
  std::vector<double> y;
  double theta = 0.0;
  double residual = 0.0;
  std::uint64_t newton_iters = 0;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& msg, ResolventResult b) : Error(msg), best(std::move(b)) {}
  ResolventResult best;
};

class PathError : public Error {
 public:
  PathError(const std::string& msg, std::vector<ResolventResult> done, std::size_t index,
            ResolventResult b)
      : Error(msg), completed(std::move(done)), failed_index(index), best(std::move(b)) {}
  std::vector<ResolventResult> completed;
  std::size_t failed_index = 0;
  ResolventResult best;
};

// x_{n+1} = J^{-1}(J x_n - lambda_n (A x_n + theta_n (J x_n - J x_1))).
RunTrace run_regularized(const MonotoneOperator& A, const Schedule& sched, const SolveConfig& cfg);

// Same kernel with theta identically zero: x_{n+1} = J^{-1}(J x_n - lambda_n A x_n).
RunTrace run_unregularized(const MonotoneOperator& A, const Schedule& sched, const SolveConfig& cfg);

// x_{n+1} = x_n - lambda_n A x_n - lambda_n theta_n (x_n - x_1); requires s = p = 2.
RunTrace run_accretive_hilbert(const MonotoneOperator& A, const Schedule& sched,
                               const SolveConfig& cfg);

// x_{n+1} = (1 - lambda_n) x_n + lambda_n (x_n - A x_n); requires s = p = 2.
RunTrace run_mann(const MonotoneOperator& A, const Schedule& sched, const SolveConfig& cfg);

RunTrace run_scheme(SchemeKind scheme, const MonotoneOperator& A, const Schedule& sched,
                    const SolveConfig& cfg);

// Solves theta (J y - J x_1) + A y = 0 by damped Newton with a central
// finite-difference Jacobian, starting from x1.
ResolventResult solve_resolvent(const MonotoneOperator& A, double theta,
                                const std::vector<double>& x1, double tol);

// y_n for theta_n along the schedule, n = 1..n_points, each solve warm-started
// from the previous point.
std::vector<ResolventResult> regularization_path(const MonotoneOperator& A, const Schedule& sched,
                                                 const std::vector<double>& x1,
                                                 std::uint64_t n_points, double tol);
std::vector<ResolventResult> regularization_path(const MonotoneOperator& A,
                                                 const std::vector<double>& thetas,
                                                 const std::vector<double>& x1, double tol);

struct XuCheckReport {
  std::vector<std::size_t> violations;  // indices into a of failing a_{n+1}
  std::size_t checks = 0;
  double worst_excess = 0.0;
};

// Termwise check of a_{n+1} <= (1 - alpha_n) a_n + alpha_n sigma_n + gamma_n.
// The coefficient sequences have one entry per transition, length(a) - 1.
XuCheckReport check_xu_recursion(std::span<const double> a, std::span<const double> alpha,
                                 std::span<const double> sigma, std::span<const double> gamma);

// Fills err/phi_star (when A has a known zero), phi_track (when a path is
// given, aligned row-for-row), and radius_estimate; recomputes each row's
// step from the stored iterate and verifies it reproduces step_size.
void track_diagnostics(RunTrace& trace, const MonotoneOperator& A,
                       const std::vector<ResolventResult>* path = nullptr);

}  // namespace lpmono
