#include <cstdint>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lpmono/errors.hpp"
#include "lpmono/geometry.hpp"
#include "lpmono/harness.hpp"
#include "lpmono/lyapunov.hpp"
#include "lpmono/operators.hpp"
#include "lpmono/solver.hpp"

namespace py = pybind11;

namespace {

lpmono::AuditReport run_audit(lpmono::Inequality ineq, const lpmono::SpaceSpec& space,
                              std::uint64_t samples, std::uint64_t seed) {
  switch (ineq) {
    case lpmono::Inequality::phi_bounds:
      return lpmono::audit_phi_bounds(space, samples, seed);
    case lpmono::Inequality::ball_bound:
      return lpmono::audit_ball_bound(space, 1.0, samples, seed);
    case lpmono::Inequality::vp_shift:
      return lpmono::audit_vp_shift(space, samples, seed);
    case lpmono::Inequality::three_point:
      return lpmono::audit_three_point(space, samples, seed);
  }
  throw lpmono::ValidationError("unknown inequality");
}

py::object json_loads(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

}  // namespace

PYBIND11_MODULE(_lpmono, m) {
  m.doc() = "zero finding for strongly monotone operators in l_s spaces";

  py::register_exception<lpmono::Error>(m, "Error");

  py::class_<lpmono::SpaceSpec>(m, "Space")
      .def(py::init([](int dim, double s, double p) { return lpmono::SpaceSpec::make(dim, s, p); }),
           py::arg("dim"), py::arg("s"), py::arg("p") = 2.0)
      .def_readonly("dim", &lpmono::SpaceSpec::dim)
      .def_readonly("s", &lpmono::SpaceSpec::s)
      .def_readonly("p", &lpmono::SpaceSpec::p)
      .def_readonly("s_conj", &lpmono::SpaceSpec::s_conj)
      .def_readonly("q", &lpmono::SpaceSpec::q)
      .def("hilbert", &lpmono::SpaceSpec::hilbert)
      .def("__repr__", [](const lpmono::SpaceSpec& sp) {
        return "Space(dim=" + std::to_string(sp.dim) + ", s=" + std::to_string(sp.s) +
               ", p=" + std::to_string(sp.p) + ")";
      });

  m.def("lp_norm",
        [](const std::vector<double>& v, double exponent) {
          return lpmono::lp_norm(std::span<const double>(v), exponent);
        },
        py::arg("v"), py::arg("exponent"));

  m.def("duality_map",
        [](const lpmono::SpaceSpec& sp, const std::vector<double>& x) {
          return lpmono::duality_map(lpmono::PrimalPoint(x, sp)).coords;
        },
        py::arg("space"), py::arg("x"));

  m.def("inverse_duality_map",
        [](const lpmono::SpaceSpec& sp, const std::vector<double>& f) {
          return lpmono::inverse_duality_map(lpmono::DualPoint(f, sp)).coords;
        },
        py::arg("space"), py::arg("f"));

  m.def("modulus_bound",
        [](double space_exponent, double arg, const std::string& kind) {
          if (kind == "smoothness")
            return lpmono::modulus_bound(space_exponent, arg, lpmono::ModulusKind::smoothness);
          if (kind == "convexity")
            return lpmono::modulus_bound(space_exponent, arg, lpmono::ModulusKind::convexity);
          throw lpmono::ValidationError("kind must be 'smoothness' or 'convexity'");
        },
        py::arg("space_exponent"), py::arg("arg"), py::arg("kind"));

  m.def("phi",
        [](const lpmono::SpaceSpec& sp, const std::vector<double>& x,
           const std::vector<double>& y) {
          return lpmono::phi(lpmono::PrimalPoint(x, sp), lpmono::PrimalPoint(y, sp));
        },
        py::arg("space"), py::arg("x"), py::arg("y"));

  m.def("phi_p",
        [](const lpmono::SpaceSpec& sp, const std::vector<double>& x,
           const std::vector<double>& y) {
          return lpmono::phi_p(lpmono::PrimalPoint(x, sp), lpmono::PrimalPoint(y, sp));
        },
        py::arg("space"), py::arg("x"), py::arg("y"));

  m.def("v_p",
        [](const lpmono::SpaceSpec& sp, const std::vector<double>& x,
           const std::vector<double>& f) {
          return lpmono::v_p(lpmono::PrimalPoint(x, sp), lpmono::DualPoint(f, sp));
        },
        py::arg("space"), py::arg("x"), py::arg("f"));

  m.def("audit",
        [](const lpmono::SpaceSpec& sp, const std::string& inequality, std::uint64_t samples,
           std::uint64_t seed) {
          const auto ineq = lpmono::inequality_from_name(inequality);
          if (!ineq)
            throw lpmono::ValidationError(
                "unknown inequality '" + inequality +
                "'; expected phi_bounds, ball_bound, vp_shift, or three_point");
          return json_loads(run_audit(*ineq, sp, samples, seed).to_json().dump());
        },
        py::arg("space"), py::arg("inequality"), py::arg("samples") = 10000,
        py::arg("seed") = 42);

  m.def("run_experiment",
        [](const std::string& config_text) {
          const auto cfg = lpmono::parse_config(config_text);
          const auto A = lpmono::build_operator(cfg);
          const auto trace = lpmono::run_scheme(cfg.scheme, A, cfg.schedule, cfg.solve);
          py::dict out;
          out["scheme"] = lpmono::scheme_name(trace.scheme);
          out["iterations"] = trace.iterations;
          out["final_residual"] = trace.final_residual;
          out["final_iterate"] = trace.final_iterate;
          if (A.known_zero) {
            std::vector<double> diff(trace.final_iterate.size());
            for (std::size_t i = 0; i < diff.size(); ++i)
              diff[i] = trace.final_iterate[i] - (*A.known_zero)[i];
            out["final_err"] = lpmono::lp_norm(std::span<const double>(diff), cfg.space.s);
          } else {
            out["final_err"] = py::none();
          }
          out["trace_csv"] = lpmono::trace_csv(trace);
          return out;
        },
        py::arg("config_text"));

  m.def("validate_schedule_prototype",
        [](double a, double b, std::uint64_t horizon, bool require_theta) {
          const auto sched = lpmono::Schedule::prototype(a, b);
          const auto val = lpmono::validate_schedule(sched, horizon, require_theta);
          py::list conditions;
          for (const auto& c : val.checks) {
            py::dict d;
            d["condition"] = c.condition;
            d["ok"] = c.ok;
            d["detail"] = c.detail;
            conditions.append(d);
          }
          py::dict out;
          out["valid"] = val.valid;
          out["conditions"] = conditions;
          return out;
        },
        py::arg("a"), py::arg("b"), py::arg("horizon") = 100000, py::arg("require_theta") = true);
}
