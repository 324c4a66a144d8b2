// pybind11 surface: spaces, derivatives, orthogonality relations, bilinear
// operators, and the theorem-suite harness.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "normgeo/bilinear.hpp"
#include "normgeo/derivatives.hpp"
#include "normgeo/json.hpp"
#include "normgeo/oracle.hpp"
#include "normgeo/orthogonality.hpp"
#include "normgeo/spaces.hpp"

namespace py = pybind11;
using namespace normgeo;

namespace {

Space make_lp(const py::object& p, int n) {
  if (py::isinstance<py::str>(p)) {
    if (p.cast<std::string>() != "inf")
      throw input_error("exponent must be a number or \"inf\"");
    return Space::lp_inf(n);
  }
  return Space::lp(p.cast<double>(), n);
}

py::dict rho_dict(const RhoResult& r) {
  py::dict d;
  d["rho_plus"] = r.rho_plus;
  d["rho_minus"] = r.rho_minus;
  d["method"] =
      r.method == RhoResult::Method::closed ? "closed" : "numeric";
  return d;
}

py::dict ortho_dict(const OrthoVerdict& v) {
  py::dict d;
  d["holds"] = v.holds;
  d["lambda_star"] = v.lambda_star;
  d["min_norm"] = v.min_norm;
  d["dip"] = v.dip;
  d["tol"] = v.tol;
  return d;
}

py::object json_to_py(const jsonio::json& j) {
  const auto loads = py::module_::import("json").attr("loads");
  return loads(jsonio::dump_canonical(j));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "norm geometry on finite-dimensional lp spaces";

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<domain_error>(m, "DomainError", PyExc_ValueError);

  py::class_<Space>(m, "Space")
      .def_static("lp", &make_lp, py::arg("p"), py::arg("n"),
                  "lp leaf; p is a number in [1, inf) or the string 'inf'")
      .def_static("sum1", &Space::sum1, py::arg("left"), py::arg("right"))
      .def_static("prodmax", &Space::prodmax, py::arg("left"),
                  py::arg("right"))
      .def_property_readonly("dim", &Space::dim)
      .def("describe", &Space::describe)
      .def("__repr__", [](const Space& s) {
        return "Space(" + s.describe() + ")";
      });

  m.def("parse_space", &jsonio::parse_space, py::arg("text"),
        "space from JSON text or the compact form lp:<p>:<n>");
  m.def("norm", [](const Space& s, const vec& v) { return norm(s, v); },
        py::arg("space"), py::arg("v"));
  m.def("sphere_sample",
        [](const Space& s, uint64_t seed, int count) {
          return sphere_sample(s, seed, count);
        },
        py::arg("space"), py::arg("seed"), py::arg("count"));

  m.def("rho",
        [](const Space& s, const vec& x, const vec& y) {
          return rho_dict(rho_auto(s, x, y));
        },
        py::arg("space"), py::arg("x"), py::arg("y"),
        "one-sided norm derivatives at x in direction y (closed form when "
        "available, difference quotients otherwise)");
  m.def("rho_closed",
        [](const Space& s, const vec& x, const vec& y) {
          return rho_dict(rho_closed(s, x, y));
        },
        py::arg("space"), py::arg("x"), py::arg("y"));
  m.def("rho_numeric",
        [](const Space& s, const vec& x, const vec& y) {
          return rho_dict(rho_numeric(s, x, y));
        },
        py::arg("space"), py::arg("x"), py::arg("y"));

  m.def("is_birkhoff",
        [](const Space& s, const vec& x, const vec& y, double tol) {
          return ortho_dict(is_birkhoff(s, x, y, tol));
        },
        py::arg("space"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-8);
  m.def("in_positive_part",
        [](const Space& s, const vec& x, const vec& y, double tol) {
          return in_positive_part(s, x, y, tol);
        },
        py::arg("space"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-10);
  m.def("in_negative_part",
        [](const Space& s, const vec& x, const vec& y, double tol) {
          return in_negative_part(s, x, y, tol);
        },
        py::arg("space"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-10);
  m.def("is_strong_birkhoff",
        [](const Space& s, const vec& x, const vec& y, double tol) {
          return is_strong_birkhoff(s, x, y, tol);
        },
        py::arg("space"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-10);
  m.def("is_approx_birkhoff",
        [](const Space& s, const vec& x, const vec& y, double eps,
           double tol) {
          const auto v = is_approx_birkhoff(s, x, y, eps, tol);
          py::dict d;
          d["holds"] = v.holds;
          d["lambda_star"] = v.lambda_star;
          d["worst_gap"] = v.worst_gap;
          return d;
        },
        py::arg("space"), py::arg("x"), py::arg("y"), py::arg("eps"),
        py::arg("tol") = 1e-8);
  m.def("is_b_star",
        [](const Space& s, const vec& x, const vec& y, double tol) {
          return is_b_star(s, x, y, tol);
        },
        py::arg("space"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-9);
  m.def("check_james",
        [](const Space& s, const vec& x, const vec& y, double tol) {
          return check_james(s, x, y, tol);
        },
        py::arg("space"), py::arg("x"), py::arg("y"), py::arg("tol") = 1e-9);
  m.def("is_smooth_point",
        [](const Space& s, const vec& x) { return is_smooth_point(s, x); },
        py::arg("space"), py::arg("x"));
  m.def("support_set",
        [](const Space& s, const vec& x) {
          const auto set = support_set(s, x);
          py::dict d;
          d["extreme"] = set.extreme;
          d["truncated"] = set.truncated;
          d["singleton"] = set.is_singleton();
          return d;
        },
        py::arg("space"), py::arg("x"));

  py::class_<BilinearOp>(m, "BilinearOp")
      .def(py::init<Space, Space, Space, std::vector<double>>(),
           py::arg("X"), py::arg("Y"), py::arg("Z"), py::arg("coeffs"),
           "coeffs flattened row-major: c[k][i][j] at (k*dimX + i)*dimY + j")
      .def_static("rank_one", &BilinearOp::rank_one, py::arg("X"),
                  py::arg("Y"), py::arg("Z"), py::arg("f"), py::arg("g"),
                  py::arg("z0"))
      .def("apply",
           [](const BilinearOp& T, const vec& x, const vec& y) {
             return T.apply(x, y);
           },
           py::arg("x"), py::arg("y"))
      .def("combined", &BilinearOp::combined, py::arg("lam"), py::arg("other"))
      .def_property_readonly("coeffs", &BilinearOp::coeffs)
      .def("to_json", [](const BilinearOp& T) {
        return json_to_py(jsonio::tensor_to_json(T));
      });
  m.def("tensor_from_json",
        [](const std::string& text) {
          return jsonio::tensor_from_json(jsonio::must_parse(text));
        },
        py::arg("text"));

  m.def("operator_norm",
        [](const BilinearOp& T, const std::string& method, uint64_t seed,
           int restarts, int grid_resolution) {
          NormMethod meth = NormMethod::multistart;
          if (method == "alternating")
            meth = NormMethod::alternating;
          else if (method == "grid")
            meth = NormMethod::grid;
          else if (method != "multistart")
            throw input_error("unknown method: " + method);
          const auto rep =
              operator_norm(T, meth, seed, restarts, grid_resolution);
          py::dict d;
          d["value"] = rep.value;
          d["x_star"] = rep.x_star;
          d["y_star"] = rep.y_star;
          d["restarts"] = rep.restarts;
          d["sweeps"] = rep.sweeps;
          d["converged"] = rep.converged;
          return d;
        },
        py::arg("T"), py::arg("method") = "multistart", py::arg("seed") = 0,
        py::arg("restarts") = 32, py::arg("grid_resolution") = 721);
  m.def("is_operator_birkhoff",
        [](const BilinearOp& T, const BilinearOp& A, double tol,
           uint64_t seed) {
          const auto v = is_operator_birkhoff(T, A, tol, seed);
          py::dict d;
          d["holds"] = v.numeric_holds;
          d["lambda_star"] = v.lambda_star;
          d["dip"] = v.dip;
          d["norm_t"] = v.norm_t;
          d["certificate_holds"] = v.certificate_holds;
          d["representatives"] = v.representatives;
          return d;
        },
        py::arg("T"), py::arg("A"), py::arg("tol") = 1e-8,
        py::arg("seed") = 0);
  m.def("is_operator_smooth",
        [](const BilinearOp& T, uint64_t seed) {
          const auto v = is_operator_smooth(T, seed);
          py::dict d;
          d["smooth"] = v.smooth;
          d["representative_count"] = v.representative_count;
          d["image_smooth"] = v.image_smooth;
          d["diagnosis"] = v.diagnosis;
          return d;
        },
        py::arg("T"), py::arg("seed") = 0);
  m.def("is_operator_approx_birkhoff",
        [](const BilinearOp& T, const BilinearOp& A, double eps, double tol,
           uint64_t seed) {
          const auto v = is_operator_approx_birkhoff(T, A, eps, tol, seed);
          py::dict d;
          d["holds"] = v.holds;
          d["lambda_star"] = v.lambda_star;
          d["worst_gap"] = v.worst_gap;
          d["certificate_holds"] = v.certificate_holds;
          return d;
        },
        py::arg("T"), py::arg("A"), py::arg("eps"), py::arg("tol") = 1e-8,
        py::arg("seed") = 0);

  m.def("theorem_ids", &theorem_ids);
  m.def("theorem_description", &theorem_description, py::arg("theorem_id"));
  m.def("default_trials", &default_trials, py::arg("theorem_id"));
  m.def("verify_theorem",
        [](const std::string& id, long trials, uint64_t seed) {
          const long n = trials < 0 ? default_trials(id) : trials;
          jsonio::json j;
          {
            py::gil_scoped_release release;
            j = verify_theorem(id, n, seed).to_json();
          }
          return json_to_py(j);
        },
        py::arg("theorem_id"), py::arg("trials") = -1, py::arg("seed") = 0,
        "run one suite; trials < 0 means the suite default");
  m.def("set_max_threads", &set_max_threads, py::arg("n"));
}
