#include <pybind11/pybind11.h>
#include <pybind11/complex.h>
#include <pybind11/stl.h>

#include "hypheat/crosscheck.hpp"
#include "hypheat/hw.hpp"
#include "hypheat/kernels.hpp"

namespace py = pybind11;
using namespace hypheat;

namespace {

PrecisionPolicy policy(py::object precision, double tol, double t_min) {
  PrecisionPolicy p;
  if (precision.is_none() || (py::isinstance<py::str>(precision) && precision.cast<std::string>() == "auto")) {
    p = PrecisionPolicy::automatic(tol);
  } else {
    p = PrecisionPolicy::fixed(precision.cast<int>(), tol);
  }
  return p.with_t_min(t_min);
}

kernels::KernelQuery make_query(const std::string& space, const std::string& rep, double t, double r, double w,
                                double y, double n, double nu, int k, int m, double gamma, const PrecisionPolicy& p) {
  kernels::KernelQuery q;
  auto s = kernels::parse_space(space);
  if (!s) throw DomainError("unknown space '" + space + "'");
  q.space = *s;
  if (rep.empty()) {
    q.rep = kernels::representations(q.space).front();
  } else {
    auto rp = kernels::parse_rep(rep);
    if (!rp) throw DomainError("unknown representation '" + rep + "'");
    q.rep = *rp;
  }
  q.t = t;
  q.r = r;
  q.w = w;
  q.y = y;
  q.n = n;
  q.nu = nu;
  q.k = k;
  q.m = m;
  q.gamma = gamma;
  q.prec = p;
  return q;
}

}  // namespace

PYBIND11_MODULE(_hypheat, mod) {
  mod.doc() = "Heat kernels on hyperbolic spaces";

  py::register_exception<DomainError>(mod, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(mod, "ConvergenceError", PyExc_ArithmeticError);

  mod.def(
      "kernel",
      [](const std::string& space, double t, double r, const std::string& rep, double w, double y, double n, double nu,
         int k, int m, double gamma, py::object precision, double tol, double t_min) {
        const auto q = make_query(space, rep, t, r, w, y, n, nu, k, m, gamma, policy(precision, tol, t_min));
        kernels::KernelValue v;
        {
          py::gil_scoped_release nogil;
          v = kernels::evaluate(q);
        }
        py::dict d;
        d["value"] = v.to_double();
        d["decimal"] = v.value.to_string(0);
        d["phase"] = v.phase;
        d["err_est"] = v.err_est;
        d["rep"] = kernels::to_string(v.rep);
        d["precision_bits"] = v.precision_bits;
        d["cancellation_digits"] = v.cancellation_digits;
        return d;
      },
      py::arg("space"), py::arg("t"), py::arg("r") = 0.0, py::kw_only(), py::arg("rep") = "", py::arg("w") = 0.0,
      py::arg("y") = 1.0, py::arg("n") = 3.0, py::arg("nu") = 0.5, py::arg("k") = 0, py::arg("m") = 2,
      py::arg("gamma") = 0.125, py::arg("precision") = py::none(), py::arg("tol") = 1e-12, py::arg("t_min") = 0.1,
      "Evaluate a heat kernel; returns a dict with value, decimal, phase, err_est and precision data.");

  mod.def(
      "representations",
      [](const std::string& space) {
        auto s = kernels::parse_space(space);
        if (!s) throw DomainError("unknown space '" + space + "'");
        std::vector<std::string> out;
        for (auto r : kernels::representations(*s)) out.push_back(kernels::to_string(r));
        return out;
      },
      py::arg("space"));

  mod.def(
      "hw_density",
      [](double t, double y, py::object precision, double tol, double t_min) {
        const auto p = policy(precision, tol, t_min);
        py::gil_scoped_release nogil;
        return hw::shared_evaluator(t, p)->density_double(y);
      },
      py::arg("t"), py::arg("y"), py::kw_only(), py::arg("precision") = py::none(), py::arg("tol") = 1e-12,
      py::arg("t_min") = 0.1, "Hartman-Watson density u(t, y).");

  mod.def("hyperbolic_distance_h2", &kernels::hyperbolic_distance_h2, py::arg("w"), py::arg("y"));

  mod.def(
      "residual",
      [](const std::string& identity, const std::map<std::string, double>& params, double tol) {
        auto id = crosscheck::parse_identity(identity);
        if (!id) throw DomainError("unknown identity '" + identity + "'");
        crosscheck::Params p(params.begin(), params.end());
        crosscheck::ResidualReport r;
        {
          py::gil_scoped_release nogil;
          r = crosscheck::residual(*id, p, PrecisionPolicy::automatic(), tol);
        }
        py::dict d;
        d["identity"] = identity;
        d["lhs"] = r.lhs.to_double();
        d["rhs"] = r.rhs.to_double();
        d["rel_residual"] = r.rel_residual;
        d["tol"] = r.tol;
        d["pass"] = r.pass;
        d["error"] = r.error;
        return d;
      },
      py::arg("identity"), py::arg("params"), py::arg("tol") = -1.0,
      "Relative residual of a bridging identity such as INT1 or BETA_PRIME.");

  mod.def(
      "run_criterion",
      [](int id, int threads) {
        crosscheck::SuiteOptions o;
        o.threads = threads;
        crosscheck::CriterionResult c;
        {
          py::gil_scoped_release nogil;
          c = crosscheck::run_criterion(id, o);
        }
        py::dict d;
        d["id"] = c.id;
        d["title"] = c.title;
        d["pass"] = c.pass;
        d["summary"] = c.summary;
        d["seconds"] = c.seconds;
        return d;
      },
      py::arg("id"), py::arg("threads") = 1);
}
