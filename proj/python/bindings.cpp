#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "peds/analysis.hpp"
#include "peds/error.hpp"
#include "peds/scenarios.hpp"
#include "peds/verify.hpp"

namespace py = pybind11;
using namespace peds;

namespace {

MapKind map_from(const std::string& map, const std::string& ordering) {
  switch (parse_map_kind(map)) {
    case MapKind::Tag::StandardCommutative: return MapKind::commutative();
    case MapKind::Tag::MixedCommutative: return MapKind::mixed();
    case MapKind::Tag::StandardNonCommutative: break;
  }
  return MapKind::noncommutative(parse_ordering(ordering));
}

py::dict check_dict(const PropertyCheck& c) {
  static const char* names[] = {"PASS", "FAIL", "SKIP"};
  py::dict d;
  d["name"] = c.name;
  d["status"] = names[static_cast<int>(c.status)];
  d["measured"] = c.measured;
  d["tolerance"] = c.tolerance;
  d["note"] = c.note;
  return d;
}

py::list check_list(const std::vector<PropertyCheck>& checks) {
  py::list out;
  for (const auto& c : checks) out.append(check_dict(c));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Projective embedding of dynamical systems";

  auto base = py::register_exception<Error>(m, "PedsError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<SingularGramError>(m, "SingularGramError", base);
  py::register_exception<PreconditionError>(m, "PreconditionError", base);
  py::register_exception<ScopeError>(m, "ScopeError", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<DivergenceError>(m, "DivergenceError", base);

  py::class_<Projector>(m, "Projector")
      .def_static("uniform_mean_field", &Projector::uniform_mean_field, py::arg("n"))
      .def_static("trivial", &Projector::trivial, py::arg("n"))
      .def_static("gram", &Projector::gram, py::arg("b"))
      .def_static("custom", &Projector::custom, py::arg("m"))
      .def_property_readonly("matrix", &Projector::matrix)
      .def_property_readonly("rank", &Projector::rank)
      .def_property_readonly("dim", &Projector::dim)
      .def("apply", &Projector::apply, py::arg("v"));
  m.def("idempotence_error", &idempotence_error, py::arg("m"));
  m.def("projector_exponential", &projector_exponential, py::arg("omega"), py::arg("a"));
  m.def("random_gram_projector", [](int k, int n, std::uint64_t seed) { return random_gram_projector(k, n, seed); },
        py::arg("k"), py::arg("n"), py::arg("seed"));

  py::class_<TargetSystem>(m, "TargetSystem")
      .def(py::init<int>(), py::arg("m"))
      .def("add_monomial", &TargetSystem::add_monomial, py::arg("equation"), py::arg("coefficient"), py::arg("exponents"),
           py::return_value_policy::reference_internal)
      .def_property_readonly("dim", &TargetSystem::dim)
      .def("eval", &TargetSystem::eval, py::arg("x"))
      .def("jacobian", &TargetSystem::jacobian, py::arg("x"));
  m.def("quartic_gradient", &quartic_gradient, py::arg("a1"), py::arg("a2"), py::arg("a3"), py::arg("a4"));
  m.def("potential2d_gradient", &potential2d_gradient);
  m.def("damped_hamiltonian", &damped_hamiltonian, py::arg("a"), py::arg("mass") = 1.0, py::arg("chi") = 1.0);
  m.def("memristor_target", &memristor_target, py::arg("chi"), py::arg("alpha"), py::arg("beta"), py::arg("voltage"));

  py::class_<PedsSystem>(m, "PedsSystem")
      .def(py::init([](const TargetSystem& t, const Projector& om, const std::string& map, const std::string& ordering, double alpha) {
             return PedsSystem(t, om, map_from(map, ordering), std::vector<Decay>(t.dim(), Decay::standard(alpha)));
           }),
           py::arg("target"), py::arg("omega"), py::arg("map") = "noncommutative", py::arg("ordering") = "standard",
           py::arg("alpha") = 0.1)
      .def_property_readonly("m", &PedsSystem::m)
      .def_property_readonly("n", &PedsSystem::n)
      .def("rhs", &PedsSystem::rhs, py::arg("state"))
      .def("uniform_state", &PedsSystem::uniform_state, py::arg("x"));
  m.def("projected_observable", &projected_observable, py::arg("omega"), py::arg("state"));

  m.def(
      "integrate",
      [](const PedsSystem& sys, const Eigen::MatrixXd& x0, double dt, long steps, const std::string& method, long stride) {
        const Trajectory tr = integrate(sys, x0, {dt, steps, parse_method(method), stride});
        Eigen::MatrixXd projected(tr.times.size(), sys.m());
        for (std::size_t r = 0; r < tr.times.size(); ++r) projected.row(r) = tr.projected[r].transpose();
        return py::make_tuple(tr.times, projected, tr.states.back());
      },
      py::arg("system"), py::arg("x0"), py::arg("dt") = 0.01, py::arg("steps") = 1000, py::arg("method") = "rk4",
      py::arg("record_stride") = 1, "Returns (times, projected observables, final state).");

  m.def(
      "jacobian",
      [](const PedsSystem& sys, const Eigen::VectorXd& x_star) {
        const JacobianReport rep = peds_jacobian_closed_form(sys, x_star);
        py::dict d;
        d["matrix"] = rep.closed_form;
        d["eigenvalues"] = rep.eigenvalues;
        d["classification"] = to_string(rep.classification);
        d["target_classification"] = to_string(rep.target_classification);
        return d;
      },
      py::arg("system"), py::arg("x_star"));
  m.def(
      "jacobian_fd", [](const PedsSystem& sys, const Eigen::MatrixXd& state, double h) { return peds_jacobian_fd(sys, state, h); },
      py::arg("system"), py::arg("state"), py::arg("h") = 1e-5);

  m.def("scenario_names", &scenario_names);
  m.def(
      "run_scenario",
      [](const std::string& name, const std::map<std::string, std::string>& overrides) {
        ScenarioConfig cfg = default_config(name);
        for (const auto& [k, v] : overrides) set_config_value(cfg, k, v);
        validate_config(cfg);
        const ScenarioResult res = run_scenario(cfg);
        py::dict d;
        d["checks"] = check_list(res.checks);
        d["summary"] = res.summary;
        d["files"] = res.files;
        d["metrics"] = res.metrics;
        d["diverged"] = !res.divergences.empty();
        d["exit_code"] = res.exit_code();
        return d;
      },
      py::arg("name"), py::arg("overrides") = std::map<std::string, std::string>{});
  m.def(
      "verify",
      [](double alpha, bool flip, std::uint64_t seed) { return check_list(run_verify({alpha, flip, seed})); },
      py::arg("alpha") = 0.5, py::arg("flip_decay_sign") = false, py::arg("seed") = 2024);
  m.attr("__version__") = build_version();
}
