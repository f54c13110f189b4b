#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geomflow/experiments.hpp"
#include "geomflow/levelsets.hpp"
#include "geomflow/operators.hpp"

namespace py = pybind11;
using namespace geomflow;

namespace {

CurvatureOperator op_by_name(const std::string& kind, int k) {
    if (kind == "mce") return CurvatureOperator::mean_curvature();
    if (kind == "gce_plus") return CurvatureOperator::gauss_positive();
    if (kind == "codim_k") return CurvatureOperator::codim_k(k);
    throw ConfigError("unknown operator kind: '" + kind + "'");
}

// Euclidean-metric jet evaluation from flat components.
double eval_flat(const std::string& kind, std::array<double, 2> zeta,
                 std::array<double, 4> a, int k) {
    Jet jet;
    jet.zeta = {zeta[0], zeta[1]};
    jet.a.m = a;
    return eval_F(op_by_name(kind, k), jet);
}

py::dict report_to_dict(const ScenarioReport& rep) {
    py::dict d;
    d["scenario"] = rep.scenario;
    d["passed"] = rep.passed;
    d["error"] = rep.error;
    py::list checks;
    for (const CheckResult& c : rep.checks) {
        py::dict cd;
        cd["name"] = c.name;
        cd["passed"] = c.passed;
        cd["measured"] = c.measured;
        cd["tolerance"] = c.tolerance;
        checks.append(cd);
    }
    d["checks"] = checks;
    d["series"] = rep.series;
    return d;
}

py::dict prop_to_dict(const PropertyReport& rep) {
    py::dict d;
    d["check"] = rep.check;
    d["operator"] = rep.op;
    d["trials"] = rep.trials;
    d["violations"] = rep.violations;
    d["passed"] = rep.passed();
    return d;
}

}  // namespace

PYBIND11_MODULE(_geomflow, m) {
    m.doc() = "Level-set curvature flow on Riemannian charts";

    m.def("scenario_names", [] { return scenario_names(); });
    m.def(
        "run_scenario",
        [](const std::string& name, const std::string& output_dir) {
            return report_to_dict(run_scenario(scenario_by_name(name), output_dir));
        },
        py::arg("name"), py::arg("output_dir") = "");

    m.def("eval_operator", &eval_flat, py::arg("kind"), py::arg("zeta"), py::arg("a"),
          py::arg("k") = 1,
          "Evaluate F(zeta, A) with the Euclidean metric; 'a' is row-major 2x2.");
    m.def("eval_codim_euclidean", &eval_codim_euclidean, py::arg("zeta"), py::arg("a"),
          py::arg("n"), py::arg("k"));

    m.def(
        "check_elliptic",
        [](const std::string& kind, int trials, std::uint64_t seed) {
            return prop_to_dict(check_elliptic(op_by_name(kind, 1), trials, seed));
        },
        py::arg("kind"), py::arg("trials") = 1000, py::arg("seed") = 42);
    m.def(
        "check_geometric",
        [](const std::string& kind, int trials, std::uint64_t seed) {
            return prop_to_dict(check_geometric(op_by_name(kind, 1), trials, seed));
        },
        py::arg("kind"), py::arg("trials") = 1000, py::arg("seed") = 42);

    m.def(
        "mean_curvature_of_distance",
        [](const std::string& profile, double s) {
            return mean_curvature_of_distance(
                ManifoldSpec::revolution(Profile::parse(profile)), s);
        },
        py::arg("profile"), py::arg("s"));
    m.def(
        "meridian_arc",
        [](const std::string& profile, double s0, double s1) {
            return meridian_arc(ManifoldSpec::revolution(Profile::parse(profile)), s0, s1);
        },
        py::arg("profile"), py::arg("s0"), py::arg("s1"));
}
