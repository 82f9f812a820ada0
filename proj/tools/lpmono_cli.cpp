#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpmono/errors.hpp"
#include "lpmono/harness.hpp"

namespace {

std::vector<lpmono::SchemeKind> parse_scheme_list(const std::string& text) {
  std::vector<lpmono::SchemeKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    const auto end = item.find_last_not_of(" \t");
    if (begin == std::string::npos) throw lpmono::ValidationError("empty scheme name in list");
    item = item.substr(begin, end - begin + 1);
    const auto kind = lpmono::scheme_from_name(item);
    if (!kind)
      throw lpmono::ValidationError(
          "unknown scheme '" + item +
          "'; expected regularized, unregularized, accretive, or mann");
    out.push_back(*kind);
  }
  if (out.empty()) throw lpmono::ValidationError("scheme list must not be empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero finding for strongly monotone operators in l_s spaces"};
  app.require_subcommand(1);

  std::string solve_config;
  CLI::App* solve =
      app.add_subcommand("solve", "run an iteration scheme; writes trace CSV and summary JSON");
  solve->add_option("--config", solve_config, "experiment config JSON file")->required();

  std::string path_config;
  std::uint64_t points = 50;
  double tol = 1e-10;
  CLI::App* path = app.add_subcommand(
      "path", "follow the regularization path with warm-started resolvents; writes CSV");
  path->add_option("--config", path_config, "experiment config JSON file")->required();
  path->add_option("--points", points, "number of path points (default 50)");
  path->add_option("--tol", tol, "resolvent residual tolerance (default 1e-10)");

  std::uint64_t audit_dim = 2;
  double audit_s = 2.0;
  double audit_p = 2.0;
  std::string inequality = "all";
  std::uint64_t samples = 10000;
  std::uint64_t seed = 42;
  std::string audit_out = "audit.json";
  CLI::App* audit =
      app.add_subcommand("audit", "sample the Lyapunov inequalities and report violations");
  audit->add_option("--dim", audit_dim, "space dimension (default 2)");
  audit->add_option("--s", audit_s, "norm exponent s (default 2)");
  audit->add_option("--p", audit_p, "gauge exponent p (default 2)");
  audit->add_option("--inequality", inequality,
                    "phi_bounds, ball_bound, vp_shift, three_point, or all (default all)");
  audit->add_option("--samples", samples, "samples per inequality (default 10000)");
  audit->add_option("--seed", seed, "RNG seed (default 42)");
  audit->add_option("--out", audit_out, "output JSON path (default audit.json)");

  std::string compare_config;
  std::string schemes_text;
  CLI::App* compare =
      app.add_subcommand("compare", "run several schemes on one problem; writes a CSV table");
  compare->add_option("--config", compare_config, "experiment config JSON file")->required();
  compare->add_option("--schemes", schemes_text, "comma-separated scheme list")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return static_cast<int>(lpmono::ExitCode::validation);
  }

  return lpmono::guarded([&]() -> int {
    if (solve->parsed()) return lpmono::cmd_solve(lpmono::load_config(solve_config));
    if (path->parsed()) return lpmono::cmd_path(lpmono::load_config(path_config), points, tol);
    if (audit->parsed()) {
      if (audit_dim < 1 || audit_dim > 100000000)
        throw lpmono::ValidationError("dim must be in [1, 100000000]");
      const auto space = lpmono::SpaceSpec::make(static_cast<int>(audit_dim), audit_s, audit_p);
      return lpmono::cmd_audit(space, inequality, samples, seed, audit_out);
    }
    if (compare->parsed())
      return lpmono::cmd_compare(lpmono::load_config(compare_config),
                                 parse_scheme_list(schemes_text));
    return static_cast<int>(lpmono::ExitCode::validation);
  });
}
