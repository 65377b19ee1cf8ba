#include "dlsctl/analysis.hpp"
#include "dlsctl/dls.hpp"
#include "dlsctl/duffing.hpp"
#include "dlsctl/errors.hpp"
#include "dlsctl/experiment.hpp"
#include "dlsctl/io.hpp"
#include "dlsctl/simulation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace dlsctl;

namespace {

py::array_t<double> as_array(const std::vector<double>& values) {
    return py::array_t<double>(static_cast<py::ssize_t>(values.size()), values.data());
}

py::dict trajectory_dict(const Trajectory& traj) {
    py::dict d;
    d["t"] = as_array(traj.t);
    d["x1"] = as_array(traj.x1);
    d["x2"] = as_array(traj.x2);
    d["v1"] = as_array(traj.v1);
    d["v2"] = as_array(traj.v2);
    d["u"] = as_array(traj.u);
    d["f2"] = as_array(traj.f2);
    d["du"] = as_array(traj.du);
    return d;
}

Trajectory trajectory_from(const py::dict& d) {
    Trajectory traj;
    const auto column = [&](const char* key) { return d[key].cast<std::vector<double>>(); };
    traj.t = column("t");
    traj.x1 = column("x1");
    traj.x2 = column("x2");
    traj.v1 = column("v1");
    traj.v2 = column("v2");
    traj.u = column("u");
    traj.f2 = column("f2");
    traj.du = column("du");
    return traj;
}

SystemState make_state(const Eigen::Vector2d& x, const Eigen::Vector2d& v, double t) {
    return SystemState{x, v, t};
}

py::dict summary_dict(const RunSummary& s) {
    py::dict d;
    d["h"] = s.h;
    d["lambda"] = s.lambda;
    d["control_enabled"] = s.control_enabled;
    d["max_envelope_x2_late"] = s.max_envelope_x2_late;
    d["exchange_depth"] = s.exchange_depth;
    d["exchange_cycles"] = s.exchange_cycles;
    d["max_control_deviation"] = s.max_control_deviation;
    d["response_rms"] = s.response_rms;
    d["suppression_ratio"] = s.suppression_ratio ? py::cast(*s.suppression_ratio) : py::none();
    d["fallback_count"] = s.fallback_count;
    return d;
}

} // namespace

PYBIND11_MODULE(_dlsctl, m) {
    m.doc() = "Damped least-squares acceleration control of coupled Duffing oscillators";

    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
    py::register_exception<SingularNormalMatrixError>(m, "SingularNormalMatrixError", PyExc_ArithmeticError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
    py::register_exception<UndefinedEstimateError>(m, "UndefinedEstimateError", PyExc_ValueError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_ValueError);
    py::register_exception<ComparisonError>(m, "ComparisonError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_KeyError);

    // dls
    m.def(
        "evaluate_target",
        [](const Vector& e, const Matrix& a, const Vector& w, const Vector& lambda, const Vector& b,
           const Matrix& c, const Vector& du) {
            return evaluate_target({e}, {a}, DlsWeights(w, lambda, b, c), {du});
        },
        py::arg("E"), py::arg("A"), py::arg("w"), py::arg("lambda_"), py::arg("B"), py::arg("C"),
        py::arg("delta_u"));
    m.def(
        "dls_solve",
        [](const Vector& e, const Matrix& a, const Vector& w, const Vector& lambda, const Vector& b,
           const Matrix& c) { return dls_solve({e}, {a}, DlsWeights(w, lambda, b, c)).delta_u; },
        py::arg("E"), py::arg("A"), py::arg("w"), py::arg("lambda_"), py::arg("B"), py::arg("C"),
        "Solve (A^T W A + C^T L C) du = A^T W E - C^T L B with diagonal W, L given as vectors.");
    m.def(
        "dls_solve_simple",
        [](const Vector& e, const Matrix& a, double lambda) { return dls_solve_simple({e}, {a}, lambda).delta_u; },
        py::arg("E"), py::arg("A"), py::arg("lambda_"));

    // duffing
    py::class_<DuffingParams>(m, "DuffingParams")
        .def(py::init([](double omega, double epsilon, double alpha, double zeta) {
                 DuffingParams p{omega, epsilon, alpha, zeta};
                 p.validate();
                 return p;
             }),
             py::arg("omega") = 1.0, py::arg("epsilon") = 0.1, py::arg("alpha") = 1.5, py::arg("zeta") = 0.025)
        .def_static("from_stiffness", &DuffingParams::from_stiffness, py::arg("K"), py::arg("gamma"),
                    py::arg("alpha"), py::arg("zeta"))
        .def_readwrite("omega", &DuffingParams::omega)
        .def_readwrite("epsilon", &DuffingParams::epsilon)
        .def_readwrite("alpha", &DuffingParams::alpha)
        .def_readwrite("zeta", &DuffingParams::zeta);

    py::class_<DuffingControlConfig>(m, "DuffingControlConfig")
        .def(py::init([](double lambda, double b, double u0, std::optional<double> u_min,
                         std::optional<double> u_max) {
                 DuffingControlConfig c;
                 c.lambda = lambda;
                 c.b = b;
                 c.u0 = u0;
                 c.u_min = u_min;
                 c.u_max = u_max;
                 c.validate();
                 return c;
             }),
             py::arg("lambda_") = 1.0, py::arg("b") = 0.0, py::arg("u0") = 0.025, py::arg("u_min") = py::none(),
             py::arg("u_max") = py::none())
        .def_readwrite("lambda_", &DuffingControlConfig::lambda)
        .def_readwrite("b", &DuffingControlConfig::b)
        .def_readwrite("u0", &DuffingControlConfig::u0)
        .def_readwrite("u_min", &DuffingControlConfig::u_min)
        .def_readwrite("u_max", &DuffingControlConfig::u_max);

    m.def(
        "duffing_rhs",
        [](const Eigen::Vector2d& x, const Eigen::Vector2d& v, double u, const DuffingParams& p) {
            return Eigen::Vector2d(duffing_rhs(make_state(x, v, 0.0), u, p));
        },
        py::arg("x"), py::arg("v"), py::arg("u"), py::arg("params"));
    m.def(
        "control_update",
        [](const Eigen::Vector2d& x, const Eigen::Vector2d& v, double u_k, const DuffingParams& p,
           const DuffingControlConfig& cfg) {
            const ControlUpdate r = control_update(make_state(x, v, 0.0), u_k, p, cfg);
            py::dict d;
            d["u_next"] = r.u_next;
            d["delta_u"] = r.delta_u;
            d["f2"] = r.f2;
            d["jacobian"] = r.jacobian;
            d["denominator"] = r.denominator;
            d["fallback"] = r.fallback;
            return d;
        },
        py::arg("x"), py::arg("v"), py::arg("u_k"), py::arg("params"), py::arg("config"));

    // simulation
    m.def("preset_names", &preset_names);
    m.def(
        "simulate_preset",
        [](const std::string& name, std::optional<double> h, std::optional<double> lambda,
           std::optional<double> t_end, std::optional<bool> control_enabled) {
            SimulationConfig config = preset_config(name);
            if (h) {
                config.h = *h;
            }
            if (lambda) {
                config.control.lambda = *lambda;
            }
            if (t_end) {
                config.t_end = *t_end;
            }
            if (control_enabled) {
                config.control_enabled = *control_enabled;
            }
            return trajectory_dict(simulate(config).trajectory);
        },
        py::arg("name"), py::arg("h") = py::none(), py::arg("lambda_") = py::none(), py::arg("t_end") = py::none(),
        py::arg("control_enabled") = py::none());
    m.def(
        "run_preset",
        [](const std::string& name, std::optional<std::filesystem::path> out_dir) {
            return summary_dict(run_preset(name, out_dir).summary);
        },
        py::arg("name"), py::arg("out_dir") = py::none());
    m.def("read_csv", [](const std::filesystem::path& p) { return trajectory_dict(read_csv(p)); });

    // analysis
    m.def("char_poly_roots", &char_poly_roots, py::arg("params"));
    m.def("q_estimate", &q_estimate, py::arg("omega"), py::arg("v2"), py::arg("lambda_"));
    m.def(
        "map_jacobian_spectrum",
        [](const DuffingParams& p, const DuffingControlConfig& cfg, double h, const Eigen::Vector2d& x,
           const Eigen::Vector2d& v, double u) {
            const SpectrumReport r = map_jacobian_spectrum(p, cfg, StepSize(h), make_state(x, v, 0.0), u);
            py::dict d;
            d["eigenvalues"] = r.eigenvalues;
            d["multipliers"] = r.multipliers;
            d["spectral_radius"] = r.spectral_radius;
            d["multiplier_radius"] = r.multiplier_radius;
            d["char_roots"] = r.char_roots;
            d["attraction_verdict"] = std::string(to_string(r.attraction_verdict));
            d["multiplier_verdict"] = std::string(to_string(r.multiplier_verdict));
            d["jacobian"] = Eigen::MatrixXd(r.jacobian);
            return d;
        },
        py::arg("params"), py::arg("config"), py::arg("h"), py::arg("x") = Eigen::Vector2d::Zero(),
        py::arg("v") = Eigen::Vector2d::Zero(), py::arg("u") = 0.0);
    m.def(
        "compare_lambda_h",
        [](const py::dict& a, const py::dict& b) {
            const ControlComparison c = compare_lambda_h(trajectory_from(a), trajectory_from(b));
            py::dict d;
            d["rms_difference"] = c.rms_difference;
            d["relative_rms"] = c.relative_rms;
            d["relative_rms_a"] = c.relative_rms_a;
            d["relative_rms_b"] = c.relative_rms_b;
            d["max_deviation"] = c.max_deviation;
            d["samples"] = c.samples;
            return d;
        },
        py::arg("run_a"), py::arg("run_b"));
}
