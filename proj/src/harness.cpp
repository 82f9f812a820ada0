#include "lpmono/harness.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <system_error>
#include <utility>

#include "lpmono/errors.hpp"
#include "lpmono/lyapunov.hpp"

#include "format.hpp"

namespace lpmono {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where + " must be a JSON object");
  return j;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(where + ": unknown key '" + item.key() + "'");
  }
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where + " must be finite");
  return d;
}

std::uint64_t as_count(const json& v, const std::string& where, std::uint64_t min_value) {
  std::uint64_t u = 0;
  if (v.is_number_unsigned()) {
    u = v.get<std::uint64_t>();
  } else if (v.is_number_integer()) {
    const std::int64_t i = v.get<std::int64_t>();
    if (i < 0) fail(where + " must be a nonnegative integer");
    u = static_cast<std::uint64_t>(i);
  } else if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d) || d < 0.0 || d != std::floor(d) || d > 9.007199254740992e15)
      fail(where + " must be a nonnegative integer");
    u = static_cast<std::uint64_t>(d);
  } else {
    fail(where + " must be a nonnegative integer");
  }
  if (u < min_value) fail(where + " must be >= " + std::to_string(min_value));
  return u;
}

std::vector<double> as_vector(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + " must be a string");
  return v.get<std::string>();
}

bool scheme_uses_theta(SchemeKind scheme) {
  return scheme == SchemeKind::regularized || scheme == SchemeKind::accretive;
}

void warn_gauge_exponent(const SpaceSpec& sp) {
  if (sp.p > 2.0)
    std::fprintf(stderr,
                 "warning: gauge exponent p = %s exceeds 2 (conjugate q = %s < p); "
                 "convergence guarantees assume p <= 2\n",
                 internal::fmt_g(sp.p).c_str(), internal::fmt_g(sp.q).c_str());
}

std::optional<double> final_error(const MonotoneOperator& A, const RunTrace& trace) {
  if (!A.known_zero) return std::nullopt;
  std::vector<double> diff(trace.final_iterate.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = trace.final_iterate[i] - (*A.known_zero)[i];
  return lp_norm(diff, A.space.s);
}

AuditReport run_audit(Inequality ineq, const SpaceSpec& space, std::uint64_t samples,
                      std::uint64_t seed) {
  switch (ineq) {
    case Inequality::phi_bounds:
      return audit_phi_bounds(space, samples, seed);
    case Inequality::ball_bound:
      return audit_ball_bound(space, 1.0, samples, seed);
    case Inequality::vp_shift:
      return audit_vp_shift(space, samples, seed);
    case Inequality::three_point:
      return audit_three_point(space, samples, seed);
  }
  throw ValidationError("unknown inequality");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(root, "config");
  check_keys(root, "config", {"space", "operator", "schedule", "run", "output"});

  ExperimentConfig cfg;

  if (!root.contains("space")) fail("config: missing required key 'space'");
  const json& jspace = require_object(root["space"], "space");
  check_keys(jspace, "space", {"dim", "s", "gauge_p"});
  if (!jspace.contains("dim")) fail("space.dim is required");
  const std::uint64_t dim = as_count(jspace["dim"], "space.dim", 1);
  if (dim > 100000000) fail("space.dim must be <= 100000000");
  if (!jspace.contains("s")) fail("space.s is required");
  const double s = as_number(jspace["s"], "space.s");
  if (!(s > 1.0)) fail("space.s must be > 1");
  double gauge_p = 2.0;
  if (jspace.contains("gauge_p")) gauge_p = as_number(jspace["gauge_p"], "space.gauge_p");
  if (!(gauge_p > 1.0)) fail("space.gauge_p must be > 1");
  cfg.space = SpaceSpec::make(static_cast<int>(dim), s, gauge_p);
  const std::size_t sdim = static_cast<std::size_t>(cfg.space.dim);

  if (!root.contains("operator")) fail("config: missing required key 'operator'");
  const json& jop = require_object(root["operator"], "operator");
  check_keys(jop, "operator", {"kind", "params", "shift"});
  if (!jop.contains("kind")) fail("operator.kind is required");
  cfg.operator_kind = as_string(jop["kind"], "operator.kind");
  if (jop.contains("params")) cfg.operator_params = as_vector(jop["params"], "operator.params");
  if (jop.contains("shift")) cfg.operator_shift = as_vector(jop["shift"], "operator.shift");

  const std::string& kind = cfg.operator_kind;
  if (kind == "diagonal_linear" || kind == "smooth_diagonal") {
    if (cfg.operator_params.size() != sdim)
      fail("operator.params has length " + std::to_string(cfg.operator_params.size()) +
           " but space.dim is " + std::to_string(cfg.space.dim));
    for (double c : cfg.operator_params)
      if (!(c > 0.0)) fail("operator.params values must be > 0 for kind '" + kind + "'");
    if (kind == "smooth_diagonal" && cfg.operator_shift)
      fail("operator.shift is not accepted for kind 'smooth_diagonal'");
  } else if (kind == "shifted_duality") {
    if (!cfg.operator_params.empty())
      fail("operator.params must be empty for kind 'shifted_duality'");
    if (!cfg.operator_shift) fail("operator.shift is required for kind 'shifted_duality'");
  } else if (kind == "j_pseudo_halved") {
    if (!cfg.operator_params.empty())
      fail("operator.params must be empty for kind 'j_pseudo_halved'");
  } else {
    fail("operator.kind '" + kind +
         "' is not one of diagonal_linear, shifted_duality, smooth_diagonal, j_pseudo_halved");
  }
  if (cfg.operator_shift && cfg.operator_shift->size() != sdim)
    fail("operator.shift has length " + std::to_string(cfg.operator_shift->size()) +
         " but space.dim is " + std::to_string(cfg.space.dim));

  double sched_a = 0.6;
  double sched_b = 0.3;
  std::vector<double> lambda_seq;
  std::vector<double> theta_seq;
  bool explicit_sched = false;
  if (root.contains("schedule")) {
    const json& jsched = require_object(root["schedule"], "schedule");
    check_keys(jsched, "schedule", {"a", "b", "lambda", "theta"});
    if (jsched.contains("lambda")) {
      if (jsched.contains("a") || jsched.contains("b"))
        fail("schedule: give either {a, b} or {lambda, theta}, not both");
      explicit_sched = true;
      lambda_seq = as_vector(jsched["lambda"], "schedule.lambda");
      if (jsched.contains("theta")) theta_seq = as_vector(jsched["theta"], "schedule.theta");
    } else {
      if (jsched.contains("theta")) fail("schedule.theta requires schedule.lambda");
      if (jsched.contains("a")) sched_a = as_number(jsched["a"], "schedule.a");
      if (jsched.contains("b")) sched_b = as_number(jsched["b"], "schedule.b");
      if (!(sched_a > 0.0)) fail("schedule.a must be > 0");
      if (!(sched_b > 0.0)) fail("schedule.b must be > 0");
    }
  }
  try {
    cfg.schedule = explicit_sched ? Schedule::explicit_seqs(lambda_seq, theta_seq)
                                  : Schedule::prototype(sched_a, sched_b);
  } catch (const ValidationError& e) {
    fail(std::string("schedule: ") + e.what());
  }

  if (!root.contains("run")) fail("config: missing required key 'run'");
  const json& jrun = require_object(root["run"], "run");
  check_keys(jrun, "run", {"scheme", "max_iter", "target_residual", "record_every", "x1", "seed"});
  if (!jrun.contains("scheme")) fail("run.scheme is required");
  const std::string scheme_str = as_string(jrun["scheme"], "run.scheme");
  const auto scheme = scheme_from_name(scheme_str);
  if (!scheme)
    fail("run.scheme '" + scheme_str +
         "' is not one of regularized, unregularized, accretive, mann");
  cfg.scheme = *scheme;
  if (!jrun.contains("max_iter")) fail("run.max_iter is required");
  cfg.solve.max_iter = as_count(jrun["max_iter"], "run.max_iter", 1);
  if (jrun.contains("target_residual")) {
    cfg.solve.target_residual = as_number(jrun["target_residual"], "run.target_residual");
    if (cfg.solve.target_residual < 0.0) fail("run.target_residual must be >= 0");
  }
  if (jrun.contains("record_every"))
    cfg.solve.record_every = as_count(jrun["record_every"], "run.record_every", 1);
  if (!jrun.contains("x1")) fail("run.x1 is required");
  cfg.solve.x1 = as_vector(jrun["x1"], "run.x1");
  if (cfg.solve.x1.size() != sdim)
    fail("run.x1 has length " + std::to_string(cfg.solve.x1.size()) + " but space.dim is " +
         std::to_string(cfg.space.dim));
  if (jrun.contains("seed")) cfg.seed = as_count(jrun["seed"], "run.seed", 0);

  if ((cfg.scheme == SchemeKind::accretive || cfg.scheme == SchemeKind::mann) &&
      !cfg.space.hilbert())
    fail("run.scheme '" + scheme_str + "' requires s = 2 and gauge_p = 2");
  if (scheme_uses_theta(cfg.scheme) && !cfg.schedule.has_theta())
    fail("run.scheme '" + scheme_str + "' requires schedule.theta (or a prototype schedule)");

  if (root.contains("output")) {
    const json& jout = require_object(root["output"], "output");
    check_keys(jout, "output", {"csv_path", "json_path"});
    if (jout.contains("csv_path")) cfg.output.csv_path = as_string(jout["csv_path"], "output.csv_path");
    if (jout.contains("json_path"))
      cfg.output.json_path = as_string(jout["json_path"], "output.json_path");
    if (cfg.output.csv_path.empty()) fail("output.csv_path must not be empty");
    if (cfg.output.json_path.empty()) fail("output.json_path must not be empty");
  }

  json echo;
  echo["space"] = {{"dim", dim}, {"s", s}, {"gauge_p", gauge_p}};
  echo["operator"]["kind"] = cfg.operator_kind;
  echo["operator"]["params"] = cfg.operator_params;
  if (cfg.operator_shift) echo["operator"]["shift"] = *cfg.operator_shift;
  if (explicit_sched) {
    echo["schedule"]["lambda"] = lambda_seq;
    if (!theta_seq.empty()) echo["schedule"]["theta"] = theta_seq;
  } else {
    echo["schedule"] = {{"a", sched_a}, {"b", sched_b}};
  }
  echo["run"] = {{"scheme", scheme_str},
                 {"max_iter", cfg.solve.max_iter},
                 {"target_residual", cfg.solve.target_residual},
                 {"record_every", cfg.solve.record_every},
                 {"x1", cfg.solve.x1},
                 {"seed", cfg.seed}};
  echo["output"] = {{"csv_path", cfg.output.csv_path}, {"json_path", cfg.output.json_path}};
  cfg.echo = std::move(echo);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for config file '" + path + "'");
  return parse_config(text);
}

MonotoneOperator build_operator(const ExperimentConfig& cfg) {
  const SpaceSpec& sp = cfg.space;
  const std::string& kind = cfg.operator_kind;
  if (kind == "diagonal_linear")
    return make_diagonal_linear(sp, cfg.operator_params,
                                cfg.operator_shift.value_or(std::vector<double>{}));
  if (kind == "shifted_duality") return make_shifted_duality(sp, *cfg.operator_shift);
  if (kind == "smooth_diagonal") return make_smooth_diagonal(sp, cfg.operator_params);
  if (kind == "j_pseudo_halved") {
    const std::vector<double> u = cfg.operator_shift.value_or(std::vector<double>(sp.dim, 0.0));
    auto t_map = [sp, u](std::span<const double> x) {
      std::vector<double> t(sp.dim);
      duality_map_into(sp, x, t);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = 0.5 * t[i] + u[i];
      return t;
    };
    MonotoneOperator A = from_j_pseudocontractive(sp, t_map);
    // J x* = 2u at the J-fixed point of T, so x* = J^{-1}(2u).
    std::vector<double> f(sp.dim);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.0 * u[i];
    std::vector<double> zero(sp.dim);
    inverse_duality_map_into(sp, f, zero);
    A.known_zero = std::move(zero);
    if (sp.hilbert()) A.claimed_eta = 0.5;
    return A;
  }
  throw ValidationError("operator.kind '" + kind +
                        "' is not one of diagonal_linear, shifted_duality, smooth_diagonal, "
                        "j_pseudo_halved");
}

nlohmann::json ExperimentSummary::to_json() const {
  json conditions = json::array();
  for (const auto& c : schedule_validation.checks)
    conditions.push_back({{"condition", c.condition}, {"ok", c.ok}, {"detail", c.detail}});
  json j;
  j["final_err"] = final_err ? json(*final_err) : json();
  j["final_residual"] = final_residual;
  j["iterations_used"] = iterations_used;
  j["schedule_valid"] = {{"valid", schedule_validation.valid}, {"conditions", conditions}};
  j["wall_time_seconds"] = wall_time_seconds;
  j["config_echo"] = config_echo;
  return j;
}

std::string trace_csv(const RunTrace& trace) {
  std::string out = "n,lambda,theta,err,residual,phi_star,phi_track,step_size\n";
  for (const TraceRow& r : trace.rows) {
    out += std::to_string(r.n);
    out += ',';
    out += internal::fmt_full(r.lambda);
    out += ',';
    out += internal::fmt_full(r.theta);
    out += ',';
    if (r.err) out += internal::fmt_full(*r.err);
    out += ',';
    out += internal::fmt_full(r.residual);
    out += ',';
    if (r.phi_star) out += internal::fmt_full(*r.phi_star);
    out += ',';
    if (r.phi_track) out += internal::fmt_full(*r.phi_track);
    out += ',';
    out += internal::fmt_full(r.step_size);
    out += '\n';
  }
  return out;
}

std::string path_csv(const std::vector<ResolventResult>& path, const MonotoneOperator& A) {
  std::string out = "n,theta,residual,err,newton_iters\n";
  std::vector<double> diff(A.space.dim);
  for (std::size_t k = 0; k < path.size(); ++k) {
    const ResolventResult& r = path[k];
    out += std::to_string(k + 1);
    out += ',';
    out += internal::fmt_full(r.theta);
    out += ',';
    out += internal::fmt_full(r.residual);
    out += ',';
    if (A.known_zero) {
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = r.y[i] - (*A.known_zero)[i];
      out += internal::fmt_full(lp_norm(diff, A.space.s));
    }
    out += ',';
    out += std::to_string(r.newton_iters);
    out += '\n';
  }
  return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp(target);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot rename '" + tmp.string() + "' to '" + target.string() +
                  "': " + ec.message());
  }
}

int guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::divergence);
  } catch (const PathError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::inner_solver);
  } catch (const NoConvergenceError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::inner_solver);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::io);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::validation);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(ExitCode::validation);
  }
}

int cmd_solve(const ExperimentConfig& cfg) {
  return guarded([&]() -> int {
    MonotoneOperator A = build_operator(cfg);
    warn_gauge_exponent(cfg.space);
    const std::uint64_t horizon =
        std::max<std::uint64_t>(2, std::min<std::uint64_t>(cfg.solve.max_iter, 100000));
    const ScheduleValidation val =
        validate_schedule(cfg.schedule, horizon, scheme_uses_theta(cfg.scheme));
    if (!val.valid)
      std::fprintf(stderr, "warning: schedule conditions not satisfied: %s\n",
                   val.failure_summary().c_str());

    RunTrace trace;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      trace = run_scheme(cfg.scheme, A, cfg.schedule, cfg.solve);
    } catch (const DivergenceError& e) {
      atomic_write_file(cfg.output.csv_path, trace_csv(e.trace));
      std::fprintf(stderr, "error: %s\n", e.what());
      return static_cast<int>(ExitCode::divergence);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    atomic_write_file(cfg.output.csv_path, trace_csv(trace));

    ExperimentSummary summary;
    summary.final_err = final_error(A, trace);
    summary.final_residual = trace.final_residual;
    summary.iterations_used = trace.iterations;
    summary.schedule_validation = val;
    summary.wall_time_seconds = wall;
    summary.config_echo = cfg.echo;
    atomic_write_file(cfg.output.json_path, summary.to_json().dump(2) + "\n");
    return static_cast<int>(ExitCode::ok);
  });
}

int cmd_path(const ExperimentConfig& cfg, std::uint64_t n_points, double tol) {
  return guarded([&]() -> int {
    if (n_points < 1) throw ValidationError("points must be >= 1");
    if (!(std::isfinite(tol) && tol > 0.0)) throw ValidationError("tol must be a number > 0");
    MonotoneOperator A = build_operator(cfg);
    warn_gauge_exponent(cfg.space);
    std::vector<ResolventResult> path;
    try {
      path = regularization_path(A, cfg.schedule, cfg.solve.x1,
                                 static_cast<std::size_t>(n_points), tol);
    } catch (const PathError& e) {
      atomic_write_file(cfg.output.csv_path, path_csv(e.completed, A));
      std::fprintf(stderr, "error: %s\n", e.what());
      return static_cast<int>(ExitCode::inner_solver);
    }
    atomic_write_file(cfg.output.csv_path, path_csv(path, A));
    return static_cast<int>(ExitCode::ok);
  });
}

int cmd_audit(const SpaceSpec& space, const std::string& inequality, std::uint64_t samples,
              std::uint64_t seed, const std::string& out_path) {
  return guarded([&]() -> int {
    if (samples < 1) throw ValidationError("samples must be >= 1");
    warn_gauge_exponent(space);
    std::vector<Inequality> which;
    if (inequality == "all") {
      which = {Inequality::phi_bounds, Inequality::ball_bound, Inequality::vp_shift,
               Inequality::three_point};
    } else if (auto one = inequality_from_name(inequality)) {
      which = {*one};
    } else {
      throw ValidationError("unknown inequality '" + inequality +
                            "'; expected phi_bounds, ball_bound, vp_shift, three_point, or all");
    }
    json reports = json::array();
    for (Inequality ineq : which) {
      const AuditReport rep = run_audit(ineq, space, samples, seed);
      std::printf("%s: %" PRIu64 " violation(s) in %" PRIu64 " samples, worst margin %s\n",
                  inequality_name(ineq).c_str(), rep.violations, rep.samples,
                  internal::fmt_g(rep.worst_margin).c_str());
      reports.push_back(rep.to_json());
    }
    atomic_write_file(out_path, reports.dump(2) + "\n");
    return static_cast<int>(ExitCode::ok);
  });
}

int cmd_compare(const ExperimentConfig& cfg, const std::vector<SchemeKind>& schemes) {
  return guarded([&]() -> int {
    if (schemes.empty()) throw ValidationError("scheme list must not be empty");
    for (SchemeKind s : schemes) {
      if ((s == SchemeKind::accretive || s == SchemeKind::mann) && !cfg.space.hilbert())
        throw ValidationError(std::string("scheme '") + scheme_name(s) +
                              "' requires s = 2 and gauge_p = 2");
      if (scheme_uses_theta(s) && !cfg.schedule.has_theta())
        throw ValidationError(std::string("scheme '") + scheme_name(s) +
                              "' requires a theta sequence in the schedule");
    }
    MonotoneOperator A = build_operator(cfg);
    warn_gauge_exponent(cfg.space);
    std::string out = "scheme,final_err,final_residual,iterations_used,wall_time_seconds\n";
    for (SchemeKind s : schemes) {
      const auto t0 = std::chrono::steady_clock::now();
      const RunTrace trace = run_scheme(s, A, cfg.schedule, cfg.solve);
      const double wall =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out += scheme_name(s);
      out += ',';
      if (const auto err = final_error(A, trace)) out += internal::fmt_full(*err);
      out += ',';
      out += internal::fmt_full(trace.final_residual);
      out += ',';
      out += std::to_string(trace.iterations);
      out += ',';
      out += internal::fmt_full(wall);
      out += '\n';
    }
    atomic_write_file(cfg.output.csv_path, out);
    return static_cast<int>(ExitCode::ok);
  });
}

}  // namespace lpmono
