#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "lpmono/harness.hpp"

using namespace lpmono;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("lpmono_harness_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "cannot open ", p.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

// Identity-operator experiment in the Hilbert plane with outputs under dir.
json base_config(const fs::path& dir) {
  json cfg;
  cfg["space"] = {{"dim", 2}, {"s", 2.0}};
  cfg["operator"] = {{"kind", "diagonal_linear"}, {"params", {1.0, 1.0}}};
  cfg["run"] = {{"scheme", "regularized"}, {"max_iter", 500}, {"target_residual", 0.0},
                {"record_every", 100}, {"x1", {1.0, -1.0}}};
  cfg["output"] = {{"csv_path", (dir / "trace.csv").string()},
                   {"json_path", (dir / "summary.json").string()}};
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LPMONO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("config parsing applies defaults") {
  const ExperimentConfig cfg = parse_config(
      R"({"space": {"dim": 2, "s": 3.0},
          "operator": {"kind": "diagonal_linear", "params": [1.0, 2.0]},
          "run": {"scheme": "regularized", "max_iter": 100, "x1": [1.0, -1.0]}})");
  CHECK(cfg.space.dim == 2);
  CHECK(cfg.space.s == 3.0);
  CHECK(cfg.space.p == 2.0);
  CHECK(cfg.schedule.is_prototype());
  CHECK(cfg.schedule.a() == 0.6);
  CHECK(cfg.schedule.b() == 0.3);
  CHECK(cfg.scheme == SchemeKind::regularized);
  CHECK(cfg.solve.max_iter == 100);
  CHECK(cfg.solve.target_residual == 1e-10);
  CHECK(cfg.solve.record_every == 100);
  CHECK(cfg.solve.x1 == std::vector<double>{1.0, -1.0});
  CHECK(cfg.seed == 42);
  CHECK(cfg.output.csv_path == "trace.csv");
  CHECK(cfg.output.json_path == "summary.json");
  CHECK(cfg.echo["space"]["gauge_p"] == 2.0);
  CHECK(cfg.echo["schedule"]["a"] == 0.6);
}

TEST_CASE("config parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_config("{"), ValidationError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ValidationError);

  auto reject = [](json cfg) {
    CHECK_THROWS_AS(parse_config(cfg.dump()), ValidationError);
  };
  const fs::path none = "/tmp";
  const json base = base_config(none);

  SUBCASE("unknown keys at every level") {
    json cfg = base;
    cfg["extra"] = 1;
    reject(cfg);
    cfg = base;
    cfg["space"]["foo"] = 1;
    reject(cfg);
    cfg = base;
    cfg["operator"]["foo"] = 1;
    reject(cfg);
    cfg = base;
    cfg["schedule"] = {{"a", 0.6}, {"foo", 1}};
    reject(cfg);
    cfg = base;
    cfg["run"]["foo"] = 1;
    reject(cfg);
    cfg = base;
    cfg["output"]["foo"] = 1;
    reject(cfg);
  }

  SUBCASE("missing or invalid required fields") {
    json cfg = base;
    cfg.erase("space");
    reject(cfg);
    cfg = base;
    cfg.erase("operator");
    reject(cfg);
    cfg = base;
    cfg.erase("run");
    reject(cfg);
    cfg = base;
    cfg["space"].erase("dim");
    reject(cfg);
    cfg = base;
    cfg["space"]["dim"] = 0;
    reject(cfg);
    cfg = base;
    cfg["space"]["s"] = 1.0;
    reject(cfg);
    cfg = base;
    cfg["space"]["gauge_p"] = 1.0;
    reject(cfg);
    cfg = base;
    cfg["run"].erase("scheme");
    reject(cfg);
    cfg = base;
    cfg["run"]["scheme"] = "halpern";
    reject(cfg);
    cfg = base;
    cfg["run"].erase("max_iter");
    reject(cfg);
    cfg = base;
    cfg["run"]["max_iter"] = 0;
    reject(cfg);
    cfg = base;
    cfg["run"]["target_residual"] = -1.0;
    reject(cfg);
    cfg = base;
    cfg["run"]["record_every"] = 0;
    reject(cfg);
    cfg = base;
    cfg["run"].erase("x1");
    reject(cfg);
    cfg = base;
    cfg["run"]["x1"] = {1.0};
    reject(cfg);
    cfg = base;
    cfg["run"]["seed"] = -1;
    reject(cfg);
    cfg = base;
    cfg["output"]["csv_path"] = "";
    reject(cfg);
  }

  SUBCASE("operator kinds constrain their parameters") {
    json cfg = base;
    cfg["operator"]["kind"] = "bogus";
    reject(cfg);
    cfg = base;
    cfg["operator"]["params"] = {1.0};
    reject(cfg);
    cfg = base;
    cfg["operator"]["params"] = {1.0, 0.0};
    reject(cfg);
    cfg = base;
    cfg["operator"] = {{"kind", "smooth_diagonal"}, {"params", {1.0, 1.0}}, {"shift", {0.0, 0.0}}};
    reject(cfg);
    cfg = base;
    cfg["operator"] = {{"kind", "shifted_duality"}, {"params", {1.0, 1.0}}, {"shift", {0.0, 0.0}}};
    reject(cfg);
    cfg = base;
    cfg["operator"] = {{"kind", "shifted_duality"}};
    reject(cfg);
    cfg = base;
    cfg["operator"] = {{"kind", "shifted_duality"}, {"shift", {1.0}}};
    reject(cfg);
  }

  SUBCASE("schedule forms are mutually exclusive") {
    json cfg = base;
    cfg["schedule"] = {{"theta", {0.5, 0.5}}};
    reject(cfg);
    cfg = base;
    cfg["schedule"] = {{"a", 0.6}, {"lambda", {0.5, 0.5}}};
    reject(cfg);
    cfg = base;
    cfg["schedule"] = {{"a", -0.6}};
    reject(cfg);
    cfg = base;
    cfg["schedule"] = {{"lambda", {1.5}}};
    try {
      parse_config(cfg.dump());
      FAIL("expected a schedule error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("schedule:") == 0);
    }
  }

  SUBCASE("scheme and space compatibility") {
    json cfg = base;
    cfg["run"]["scheme"] = "accretive";
    cfg["space"]["s"] = 3.0;
    reject(cfg);
    cfg = base;
    cfg["run"]["scheme"] = "mann";
    cfg["space"]["gauge_p"] = 3.0;
    reject(cfg);
    cfg = base;
    cfg["schedule"] = {{"lambda", {0.5, 0.5}}};
    cfg["run"]["max_iter"] = 2;
    reject(cfg);  // regularized needs theta
  }
}

TEST_CASE("config echo reproduces itself") {
  json cfg = base_config("/tmp/echo");
  cfg["space"]["gauge_p"] = 1.5;
  cfg["schedule"] = {{"lambda", {0.5, 0.25}}, {"theta", {0.9, 0.8}}};
  cfg["run"]["max_iter"] = 2;
  cfg["run"]["seed"] = 7;
  cfg["operator"]["shift"] = {1.0, 0.5};

  const ExperimentConfig first = parse_config(cfg.dump());
  const ExperimentConfig second = parse_config(first.echo.dump());
  CHECK(second.echo == first.echo);

  const ExperimentConfig minimal = parse_config(
      R"({"space": {"dim": 1, "s": 2.0},
          "operator": {"kind": "smooth_diagonal", "params": [1.0]},
          "run": {"scheme": "unregularized", "max_iter": 5, "x1": [1.0]}})");
  CHECK(parse_config(minimal.echo.dump()).echo == minimal.echo);
}

TEST_CASE("operator construction from configs") {
  SUBCASE("diagonal with a shift") {
    json cfg = base_config("/tmp");
    cfg["operator"] = {{"kind", "diagonal_linear"}, {"params", {2.0, 4.0}}, {"shift", {2.0, 4.0}}};
    const MonotoneOperator A = build_operator(parse_config(cfg.dump()));
    REQUIRE(A.known_zero.has_value());
    CHECK((*A.known_zero)[0] == 1.0);
    CHECK((*A.known_zero)[1] == 1.0);
  }

  SUBCASE("shifted duality in l_3 with gauge 3") {
    json cfg = base_config("/tmp");
    cfg["space"] = {{"dim", 2}, {"s", 3.0}, {"gauge_p", 3.0}};
    cfg["operator"] = {{"kind", "shifted_duality"}, {"shift", {1.0, -2.0}}};
    const MonotoneOperator A = build_operator(parse_config(cfg.dump()));
    CHECK(zero_residual(A) == 0.0);
  }

  SUBCASE("smooth diagonal zero at the origin") {
    json cfg = base_config("/tmp");
    cfg["operator"] = {{"kind", "smooth_diagonal"}, {"params", {1.0, 2.0}}};
    const MonotoneOperator A = build_operator(parse_config(cfg.dump()));
    CHECK(zero_residual(A) == 0.0);
  }

  SUBCASE("halved duality pseudocontraction") {
    json cfg = base_config("/tmp");
    cfg["operator"] = {{"kind", "j_pseudo_halved"}, {"shift", {0.5, 0.0}}};
    const MonotoneOperator A = build_operator(parse_config(cfg.dump()));
    REQUIRE(A.known_zero.has_value());
    CHECK((*A.known_zero)[0] == 1.0);
    CHECK((*A.known_zero)[1] == 0.0);
    CHECK(A.claimed_eta == 0.5);
    CHECK(zero_residual(A) <= 1e-9);

    cfg["space"] = {{"dim", 2}, {"s", 3.0}};
    cfg["operator"] = {{"kind", "j_pseudo_halved"}};
    const MonotoneOperator B = build_operator(parse_config(cfg.dump()));
    REQUIRE(B.known_zero.has_value());
    CHECK((*B.known_zero)[0] == 0.0);
    CHECK(B.claimed_eta == 0.0);
    CHECK(zero_residual(B) == 0.0);
  }
}

TEST_CASE("bundled presets parse and build") {
  const char* names[] = {"hilbert-identity", "lp-diagonal", "lp3-diagonal", "lp3-shifted-duality",
                         "jpseudo-halved"};
  for (const char* name : names) {
    CAPTURE(name);
    const fs::path p = fs::path(LPMONO_PRESET_DIR) / (std::string(name) + ".json");
    const ExperimentConfig cfg = load_config(p.string());
    CHECK(cfg.space.dim >= 1);
    CHECK(cfg.solve.x1.size() == static_cast<std::size_t>(cfg.space.dim));
    CHECK_FALSE(cfg.output.csv_path.empty());
    const MonotoneOperator A = build_operator(cfg);
    REQUIRE(A.known_zero.has_value());
    CHECK(zero_residual(A) <= 1e-9);
  }
}

TEST_CASE("solve command writes deterministic outputs") {
  const fs::path d1 = fresh_dir("solve1");
  const fs::path d2 = fresh_dir("solve2");
  const ExperimentConfig cfg1 = parse_config(base_config(d1).dump());
  const ExperimentConfig cfg2 = parse_config(base_config(d2).dump());

  REQUIRE(cmd_solve(cfg1) == 0);
  REQUIRE(cmd_solve(cfg2) == 0);

  const std::string csv1 = slurp(d1 / "trace.csv");
  CHECK(csv1 == slurp(d2 / "trace.csv"));

  const std::vector<std::string> lines = split_lines(csv1);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "n,lambda,theta,err,residual,phi_star,phi_track,step_size");

  // Golden first row: the theta term vanishes at the anchor, so the step is
  // lambda_1 times the anchor norm.
  const double l1 = std::pow(2.0, -0.6);
  const double t1 = std::pow(2.0, -0.3);
  const double nx = lp_norm(std::vector<double>{1.0, 1.0}, 2.0);
  const double step = lp_norm(std::vector<double>{l1, l1}, 2.0);
  CHECK(lines[1] == "1," + fmt17(l1) + "," + fmt17(t1) + "," + fmt17(nx) + "," + fmt17(nx) +
                        "," + fmt17(std::pow(nx, 2.0)) + ",," + fmt17(step));
  CHECK(split_fields(lines[6])[0] == "500");

  json s1 = json::parse(slurp(d1 / "summary.json"));
  json s2 = json::parse(slurp(d2 / "summary.json"));
  CHECK(s1["iterations_used"] == 500);
  CHECK(s1["schedule_valid"]["valid"] == true);
  CHECK(s1["final_err"].get<double>() > 0.0);
  CHECK(s1["config_echo"]["run"]["max_iter"] == 500);
  s1["wall_time_seconds"] = 0.0;
  s2["wall_time_seconds"] = 0.0;
  s1["config_echo"]["output"] = json::object();
  s2["config_echo"]["output"] = json::object();
  CHECK(s1 == s2);

  SUBCASE("an invalid schedule is reported but still run") {
    json cfg = base_config(d1);
    cfg["schedule"] = {{"a", 0.4}, {"b", 0.3}};
    REQUIRE(cmd_solve(parse_config(cfg.dump())) == 0);
    const json summary = json::parse(slurp(d1 / "summary.json"));
    CHECK(summary["schedule_valid"]["valid"] == false);
    bool found = false;
    for (const json& c : summary["schedule_valid"]["conditions"])
      if (c["condition"] == "lambda_square_summable") {
        found = true;
        CHECK(c["ok"] == false);
      }
    CHECK(found);
  }
}

TEST_CASE("solve command flushes the partial trace on divergence") {
  const fs::path dir = fresh_dir("diverge");
  json cfg = base_config(dir);
  cfg["space"] = {{"dim", 1}, {"s", 2.0}};
  cfg["operator"] = {{"kind", "diagonal_linear"}, {"params", {10.0}}};
  cfg["schedule"] = {{"lambda", json::array()}};
  for (int i = 0; i < 300; ++i) cfg["schedule"]["lambda"].push_back(0.9);
  cfg["run"] = {{"scheme", "unregularized"}, {"max_iter", 250}, {"record_every", 10},
                {"x1", {1.0}}};

  CHECK(cmd_solve(parse_config(cfg.dump())) == 3);
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK_FALSE(fs::exists(dir / "summary.json"));
  const std::vector<std::string> lines = split_lines(slurp(dir / "trace.csv"));
  CHECK(lines.size() > 10);
}

TEST_CASE("path command") {
  const fs::path dir = fresh_dir("path");
  json base = base_config(dir);
  base["operator"] = {{"kind", "diagonal_linear"}, {"params", {2.0, 5.0}}, {"shift", {2.0, 5.0}}};
  base["run"]["x1"] = {2.0, -1.0};
  const ExperimentConfig cfg = parse_config(base.dump());

  SUBCASE("closed-form bias decays along the path") {
    REQUIRE(cmd_path(cfg, 5, 1e-12) == 0);
    const std::vector<std::string> lines = split_lines(slurp(dir / "trace.csv"));
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "n,theta,residual,err,newton_iters");
    double prev_err = 1e300;
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const std::vector<std::string> f = split_fields(lines[k]);
      REQUIRE(f.size() == 5);
      CHECK(f[0] == std::to_string(k));
      const double theta = std::stod(f[1]);
      CHECK(theta == std::pow(static_cast<double>(k) + 1.0, -0.3));
      CHECK(std::stod(f[2]) <= 1e-12);
      const double err = std::stod(f[3]);
      CHECK(err < prev_err);
      prev_err = err;
    }
  }

  SUBCASE("a zero anchor short-circuits every solve") {
    json at_zero = base;
    at_zero["run"]["x1"] = {1.0, 1.0};
    REQUIRE(cmd_path(parse_config(at_zero.dump()), 3, 1e-12) == 0);
    const std::vector<std::string> lines = split_lines(slurp(dir / "trace.csv"));
    REQUIRE(lines.size() == 4);
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const std::vector<std::string> f = split_fields(lines[k]);
      CHECK(f[2] == "0");
      CHECK(f[3] == "0");
      CHECK(f[4] == "0");
    }
  }

  SUBCASE("argument validation") {
    CHECK(cmd_path(cfg, 0, 1e-10) == 2);
    CHECK(cmd_path(cfg, 5, 0.0) == 2);
    CHECK(cmd_path(cfg, 5, -1.0) == 2);
  }

  SUBCASE("inner-solver failure writes the completed prefix") {
    CHECK(cmd_path(cfg, 3, 1e-30) == 4);
    const std::vector<std::string> lines = split_lines(slurp(dir / "trace.csv"));
    CHECK(lines.size() == 1);
    CHECK(lines[0] == "n,theta,residual,err,newton_iters");
  }
}

TEST_CASE("audit command") {
  const fs::path dir = fresh_dir("audit");
  const SpaceSpec l2 = SpaceSpec::make(2, 2.0, 2.0);

  SUBCASE("all inequalities in one report file") {
    const fs::path out = dir / "audit.json";
    REQUIRE(cmd_audit(l2, "all", 200, 42, out.string()) == 0);
    const json reports = json::parse(slurp(out));
    REQUIRE(reports.is_array());
    REQUIRE(reports.size() == 4);
    for (const json& rep : reports) {
      CHECK(rep.size() == 6);
      CHECK(rep["samples"] == 200);
      CHECK(rep["violations"] == 0);
      CHECK(rep["seed"] == 42);
    }
    CHECK(reports[0]["inequality"] == "phi_bounds");
    CHECK(reports[1]["witness"].contains("ball_radius"));
  }

  SUBCASE("a single inequality") {
    const fs::path out = dir / "one.json";
    REQUIRE(cmd_audit(l2, "three_point", 50, 7, out.string()) == 0);
    const json reports = json::parse(slurp(out));
    REQUIRE(reports.size() == 1);
    CHECK(reports[0]["inequality"] == "three_point");
  }

  SUBCASE("bad arguments") {
    const fs::path out = dir / "never.json";
    CHECK(cmd_audit(l2, "lemma9", 50, 7, out.string()) == 2);
    CHECK_FALSE(fs::exists(out));
    CHECK(cmd_audit(l2, "all", 0, 7, out.string()) == 2);
  }
}

TEST_CASE("compare command") {
  const fs::path dir = fresh_dir("compare");
  json base = base_config(dir);
  base["operator"] = {{"kind", "diagonal_linear"}, {"params", {1.0, 4.0}}, {"shift", {1.0, 4.0}}};
  base["run"] = {{"scheme", "regularized"}, {"max_iter", 400}, {"target_residual", 0.0},
                 {"record_every", 400}, {"x1", {2.0, -1.0}}};
  const ExperimentConfig cfg = parse_config(base.dump());

  SUBCASE("regularized and accretive agree") {
    REQUIRE(cmd_compare(cfg, {SchemeKind::regularized, SchemeKind::accretive}) == 0);
    const std::vector<std::string> lines = split_lines(slurp(dir / "trace.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "scheme,final_err,final_residual,iterations_used,wall_time_seconds");
    const std::vector<std::string> reg = split_fields(lines[1]);
    const std::vector<std::string> acc = split_fields(lines[2]);
    CHECK(reg[0] == "regularized");
    CHECK(acc[0] == "accretive");
    CHECK(std::stod(reg[1]) == doctest::Approx(std::stod(acc[1])).epsilon(1e-9));
    CHECK(reg[3] == "400");
    CHECK(acc[3] == "400");
  }

  SUBCASE("incompatible schemes fail before any run") {
    json l3 = base;
    l3["space"]["s"] = 3.0;
    l3["run"]["scheme"] = "unregularized";
    const ExperimentConfig cfg3 = parse_config(l3.dump());
    CHECK(cmd_compare(cfg3, {SchemeKind::unregularized, SchemeKind::mann}) == 2);
    CHECK_FALSE(fs::exists(dir / "trace.csv"));
  }

  SUBCASE("empty scheme list") {
    CHECK(cmd_compare(cfg, {}) == 2);
  }
}

TEST_CASE("unwritable outputs map to the I/O exit code") {
  json cfg = base_config("/nonexistent_lpmono_dir");
  cfg["run"]["max_iter"] = 5;
  CHECK(cmd_solve(parse_config(cfg.dump())) == 5);
  CHECK(cmd_audit(SpaceSpec::make(1, 2.0, 2.0), "phi_bounds", 5, 1,
                  "/nonexistent_lpmono_dir/audit.json") == 5);
}

TEST_CASE("guarded maps exceptions to exit codes") {
  CHECK(guarded([] { return 0; }) == 0);
  CHECK(guarded([]() -> int { throw ValidationError("v"); }) == 2);
  CHECK(guarded([]() -> int { throw ShapeError("s"); }) == 2);
  CHECK(guarded([]() -> int { throw DivergenceError("d", RunTrace{}); }) == 3);
  CHECK(guarded([]() -> int { throw NoConvergenceError("n", ResolventResult{}); }) == 4);
  CHECK(guarded([]() -> int {
          throw PathError("p", {}, 0, ResolventResult{});
        }) == 4);
  CHECK(guarded([]() -> int { throw IoError("i"); }) == 5);
  CHECK(guarded([]() -> int { throw std::runtime_error("r"); }) == 2);
}

TEST_CASE("command-line interface exit codes") {
  const fs::path dir = fresh_dir("cli");

  CHECK(run_cli("") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("solve") == 2);
  CHECK(run_cli("solve --config /nonexistent_lpmono.json") == 5);

  json cfg = base_config(dir);
  cfg["run"]["max_iter"] = 50;
  const fs::path cfg_path = dir / "experiment.json";
  std::ofstream(cfg_path) << cfg.dump(2);

  CHECK(run_cli("solve --config " + cfg_path.string()) == 0);
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(fs::exists(dir / "summary.json"));

  const fs::path audit_out = dir / "audit.json";
  CHECK(run_cli("audit --samples 50 --out " + audit_out.string()) == 0);
  CHECK(fs::exists(audit_out));
  CHECK(run_cli("audit --inequality lemma9 --out " + audit_out.string()) == 2);
  CHECK(run_cli("audit --s 1.0 --out " + audit_out.string()) == 2);

  CHECK(run_cli("compare --config " + cfg_path.string() + " --schemes mann,bogus") == 2);
  CHECK(run_cli("compare --config " + cfg_path.string() + " --schemes \"regularized, mann\"") ==
        0);
}
