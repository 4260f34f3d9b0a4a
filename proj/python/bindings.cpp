#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jacobiflow/connection.hpp"
#include "jacobiflow/model_zoo.hpp"
#include "jacobiflow/spray_flow.hpp"
#include "jacobiflow/verify.hpp"

namespace py = pybind11;
using namespace jacobiflow;

namespace {

using Vd = Vec<double>;

py::array_t<double> as_array(const std::vector<Vd> &rows) {
  const std::size_t n = rows.size(), m = n ? rows.front().size() : 0;
  py::array_t<double> out({n, m});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = rows[i][j];
  return out;
}

py::array_t<double> as_array(const std::vector<double> &v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

template <class State, class F>
py::array_t<double> column(const Trajectory<State> &traj, F pick) {
  std::vector<Vd> rows;
  rows.reserve(traj.states.size());
  for (const auto &s : traj.states)
    rows.push_back(pick(s));
  return as_array(rows);
}

py::tuple tt_tuple(const TTVector<double> &t) { return py::make_tuple(t.x, t.xi, t.eta, t.zeta); }

ManifoldModel make_model(const std::string &kind, int dim, double radius, double beta) {
  ModelSpec s;
  s.kind = parse_model_kind(kind);
  s.dim = dim;
  s.radius = radius;
  s.beta = beta;
  return build(s);
}

ManifoldModel model_from_config(const std::string &config_json) {
  return build(model_spec_from_json(nlohmann::json::parse(config_json)));
}

py::dict geodesic(const ManifoldModel &model, const Vd &x0, const Vd &v0, double t_max, double h) {
  const auto traj = integrate_geodesic(model, {x0, v0}, t_max, h);
  py::dict d;
  d["t"] = as_array(traj.times);
  d["x"] = column(traj, [](const auto &s) { return s.base; });
  d["v"] = column(traj, [](const auto &s) { return s.vec; });
  return d;
}

py::dict jacobi(const ManifoldModel &model, const Vd &x0, const Vd &v0, const Vd &J0,
                const Vd &nablaJ0, double t_max, double h) {
  const auto Y0 = jacobi_state_from_covariant(model, {x0, v0}, J0, nablaJ0);
  const auto traj = integrate_jacobi_flow(model, Y0, t_max, h);
  py::dict d;
  d["t"] = as_array(traj.times);
  d["x"] = column(traj, [](const auto &s) { return s.x; });
  d["v"] = column(traj, [](const auto &s) { return s.xi; });
  d["J"] = column(traj, [](const auto &s) { return s.J; });
  d["Jdot"] = column(traj, [](const auto &s) { return s.Jdot; });
  d["nablaJ"] = column(traj, [&model](const auto &s) { return covariant_velocity(model, s); });
  double residual = 0.0;
  for (const auto &s : traj.states)
    residual = std::fmax(residual, norm_inf(jacobi_residual(model, s)));
  d["max_residual"] = residual;
  return d;
}

py::dict classical_jacobi(const ManifoldModel &model, const Vd &x0, const Vd &v0, const Vd &J0,
                          const Vd &nablaJ0, double t_max, double h) {
  const auto traj = classical_jacobi_oracle(model, {x0, v0}, J0, nablaJ0, t_max, h);
  py::dict d;
  d["t"] = as_array(traj.times);
  d["J"] = column(traj, [](const auto &s) { return s.J; });
  d["P"] = column(traj, [](const auto &s) { return s.P; });
  return d;
}

py::dict variation(const ManifoldModel &model, const Vd &x0, const Vd &v0, const Vd &J0,
                   const Vd &Jdot0, double t_max, double h, double s_eps) {
  auto X_of_s = [&](double s) {
    return TangentVector<double>{add(x0, scale(s, J0)), add(v0, scale(s, Jdot0))};
  };
  const auto traj = variation_oracle(model, X_of_s, t_max, h, s_eps);
  py::dict d;
  d["t"] = as_array(traj.times);
  d["J"] = as_array(traj.states);
  return d;
}

std::string verify_json(const std::string &suite, std::uint64_t seed,
                        const std::map<std::string, double> &tol, int parallel) {
  VerifyOptions opts;
  opts.seed = seed;
  opts.tolerance_overrides = tol;
  opts.parallel = parallel;
  return run_verify(suite, opts).to_json().dump();
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Connector, spray and Jacobi-flow computations in a single chart";

  py::register_exception<LeftDomain>(m, "LeftDomainError", PyExc_RuntimeError);
  py::register_exception<StepRejected>(m, "StepRejectedError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InvalidModel>(m, "InvalidModelError", PyExc_ValueError);
  py::register_exception<EvaluationError>(m, "EvaluationError", PyExc_ArithmeticError);
  py::register_exception<NotVertical>(m, "NotVerticalError", PyExc_ValueError);

  py::class_<ManifoldModel>(m, "Model")
      .def_readonly("name", &ManifoldModel::name)
      .def_readonly("dim", &ManifoldModel::dim)
      .def_property_readonly("has_metric", [](const ManifoldModel &mm) { return bool(mm.metric); })
      .def("contains", &ManifoldModel::contains, py::arg("y"))
      .def(
          "gamma",
          [](const ManifoldModel &mm, const Vd &y, const Vd &v, const Vd &xi) {
            require_length(y, static_cast<std::size_t>(mm.dim), "y");
            require_length(v, static_cast<std::size_t>(mm.dim), "v");
            require_length(xi, static_cast<std::size_t>(mm.dim), "xi");
            mm.require_domain(y, "gamma");
            return mm.gamma(y, v, xi);
          },
          py::arg("y"), py::arg("v"), py::arg("xi"))
      .def("inner", &ManifoldModel::inner, py::arg("x"), py::arg("u"), py::arg("v"))
      .def("norm", &ManifoldModel::norm, py::arg("x"), py::arg("u"))
      .def("__repr__", [](const ManifoldModel &mm) {
        return "<jacobiflow.Model " + mm.name + " dim=" + std::to_string(mm.dim) + ">";
      });

  m.def("model", &make_model, py::arg("kind"), py::arg("dim") = 2, py::arg("radius") = 1.0,
        py::arg("beta") = 1.0);
  m.def("model_from_config", &model_from_config, py::arg("config_json"));

  m.def("flip", [](const Vd &x, const Vd &xi, const Vd &eta, const Vd &zeta) {
    return tt_tuple(flip(TTVector<double>{x, xi, eta, zeta}));
  });
  m.def(
      "connector",
      [](const ManifoldModel &mm, const Vd &x, const Vd &xi, const Vd &eta, const Vd &zeta) {
        return connector(mm, TTVector<double>{x, xi, eta, zeta}).vec;
      },
      py::arg("model"), py::arg("x"), py::arg("xi"), py::arg("eta"), py::arg("zeta"));
  m.def(
      "horizontal_lift",
      [](const ManifoldModel &mm, const Vd &xi, const Vd &y, const Vd &v) {
        return tt_tuple(horizontal_lift(mm, xi, TangentVector<double>{y, v}));
      },
      py::arg("model"), py::arg("xi"), py::arg("y"), py::arg("v"));
  m.def(
      "spray",
      [](const ManifoldModel &mm, const Vd &y, const Vd &xi) {
        return tt_tuple(spray(mm, TangentVector<double>{y, xi}));
      },
      py::arg("model"), py::arg("y"), py::arg("xi"));
  m.def("curvature", &curvature_operator, py::arg("model"), py::arg("x"), py::arg("u"),
        py::arg("v"), py::arg("w"));
  m.def(
      "torsion",
      [](const ManifoldModel &mm, const Vd &x, const Vd &u, const Vd &v) {
        return torsion(mm, x, u, v);
      },
      py::arg("model"), py::arg("x"), py::arg("u"), py::arg("v"));
  m.def("sectional_curvature", &sectional_curvature, py::arg("model"), py::arg("x"), py::arg("u"),
        py::arg("v"));

  m.def("geodesic", &geodesic, py::arg("model"), py::arg("x0"), py::arg("v0"), py::arg("t_max"),
        py::arg("h") = kDefaultStep);
  m.def("jacobi", &jacobi, py::arg("model"), py::arg("x0"), py::arg("v0"), py::arg("J0"),
        py::arg("nablaJ0"), py::arg("t_max"), py::arg("h") = kDefaultStep);
  m.def("classical_jacobi", &classical_jacobi, py::arg("model"), py::arg("x0"), py::arg("v0"),
        py::arg("J0"), py::arg("nablaJ0"), py::arg("t_max"), py::arg("h") = kDefaultStep);
  m.def("variation_oracle", &variation, py::arg("model"), py::arg("x0"), py::arg("v0"),
        py::arg("J0"), py::arg("Jdot0"), py::arg("t_max"), py::arg("h") = kDefaultStep,
        py::arg("s_eps") = 1e-4);
  m.def("_verify_json", &verify_json, py::arg("suite") = "all", py::arg("seed") = 42,
        py::arg("tol") = std::map<std::string, double>{}, py::arg("parallel") = 1,
        py::call_guard<py::gil_scoped_release>());
}
