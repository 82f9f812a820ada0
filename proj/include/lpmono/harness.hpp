#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpmono/geometry.hpp"
#include "lpmono/operators.hpp"
#include "lpmono/solver.hpp"

namespace lpmono {

struct OutputSpec {
  std::string csv_path = "trace.csv";
  std::string json_path = "summary.json";
};

// A fully validated experiment description. `echo` holds the normalized JSON
// form (defaults applied) that reproduces this config when parsed again.
struct ExperimentConfig {
  SpaceSpec space = SpaceSpec::make(1, 2.0, 2.0);
  std::string operator_kind;
  std::vector<double> operator_params;
  std::optional<std::vector<double>> operator_shift;
  Schedule schedule = Schedule::prototype(0.6, 0.3);
  SchemeKind scheme = SchemeKind::regularized;
  SolveConfig solve;
  std::uint64_t seed = 42;
  OutputSpec output;
  nlohmann::json echo;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

MonotoneOperator build_operator(const ExperimentConfig& cfg);

struct ExperimentSummary {
  std::optional<double> final_err;
  double final_residual = 0.0;
  std::uint64_t iterations_used = 0;
  ScheduleValidation schedule_validation;
  double wall_time_seconds = 0.0;
  nlohmann::json config_echo;

  nlohmann::json to_json() const;
};

// Serialization helpers shared by the commands and the tests.
std::string trace_csv(const RunTrace& trace);
std::string path_csv(const std::vector<ResolventResult>& path, const MonotoneOperator& A);
void atomic_write_file(const std::string& path, const std::string& content);

// Maps exceptions thrown by `fn` to the exit-status contract:
// 0 completed, 2 validation/usage, 3 divergence, 4 inner solver, 5 I/O.
int guarded(const std::function<int()>& fn);

int cmd_solve(const ExperimentConfig& cfg);
int cmd_path(const ExperimentConfig& cfg, std::uint64_t n_points, double tol);
int cmd_audit(const SpaceSpec& space, const std::string& inequality, std::uint64_t samples,
              std::uint64_t seed, const std::string& out_path);
int cmd_compare(const ExperimentConfig& cfg, const std::vector<SchemeKind>& schemes);

}  // namespace lpmono
