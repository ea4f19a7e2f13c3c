// bindings.cpp — Python module _core: detection runs, synthesis, recipes

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "becgrad/experiments.hpp"
#include "becgrad/metrology.hpp"
#include "becgrad/statesynth.hpp"

namespace py = pybind11;
using namespace becgrad;

namespace {

DetectionSetup make_setup(std::size_t N, double omega, double omega_d, double chi, double gamma_o, double gamma_t_ee,
                          double gamma_t_eg, const std::string& initial, double u_over_ej) {
    DetectionSetup s;
    s.params.N = N;
    s.params.Omega = omega;
    s.params.Omega_D = omega_d;
    s.params.chi = chi;
    s.rates = {gamma_o, gamma_t_ee, gamma_t_eg};
    const auto init = initial_state_from_string(initial);
    if (!init) throw py::value_error("unknown initial state '" + initial + "'");
    s.initial = *init;
    s.u_over_ej = u_over_ej;
    return s;
}

py::dict series_dict(const EstimatorSeries& s) {
    std::vector<double> var;
    for (std::size_t i = 0; i < s.times.size(); ++i) var.push_back(s.variance(i));
    py::dict d;
    d["t"] = s.times;
    d["estimator"] = s.estimator;
    d["variance"] = var;
    d["uncertainty"] = s.uncertainty;
    d["jz_sq"] = s.jz_sq;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "entangled two-BEC gradient magnetometry simulator";
    m.attr("__version__") = kVersion;

    m.def(
        "simulate",
        [](std::size_t N, double t_end, std::size_t samples, double omega, double omega_d, double chi, double gamma_o,
           double gamma_t_ee, double gamma_t_eg, const std::string& initial, double u_over_ej) {
            const DetectionSetup s = make_setup(N, omega, omega_d, chi, gamma_o, gamma_t_ee, gamma_t_eg, initial, u_over_ej);
            const SimulationResult r = [&] {
                py::gil_scoped_release release;
                return simulate_detection(s, TimeGrid::uniform(0.0, t_end, samples));
            }();
            return series_dict(r.series);
        },
        py::arg("N"), py::arg("t_end"), py::arg("samples"), py::kw_only(), py::arg("omega") = 1.0,
        py::arg("omega_d") = 0.05, py::arg("chi") = 0.0, py::arg("gamma_o") = 0.0, py::arg("gamma_t_ee") = 0.0,
        py::arg("gamma_t_eg") = 0.0, py::arg("initial_state") = "singlet", py::arg("u_over_ej") = 10.0,
        "Estimator time series on a uniform grid [0, t_end].");

    m.def(
        "uncertainty_at",
        [](std::size_t N, double t, double omega, double omega_d, double chi, double gamma_o, double gamma_t_ee,
           double gamma_t_eg, const std::string& initial, double u_over_ej) {
            const DetectionSetup s = make_setup(N, omega, omega_d, chi, gamma_o, gamma_t_ee, gamma_t_eg, initial, u_over_ej);
            py::gil_scoped_release release;
            return uncertainty_at(s, t).uncertainty;
        },
        py::arg("N"), py::arg("t"), py::kw_only(), py::arg("omega") = 1.0, py::arg("omega_d") = 0.05,
        py::arg("chi") = 0.0, py::arg("gamma_o") = 0.0, py::arg("gamma_t_ee") = 0.0, py::arg("gamma_t_eg") = 0.0,
        py::arg("initial_state") = "singlet", py::arg("u_over_ej") = 10.0,
        "delta phi_D at time t.");

    m.def(
        "synthesize",
        [](std::size_t N, double u_over_ej) {
            const SynthesisResult r = [&] {
                py::gil_scoped_release release;
                return synthesize(N, u_over_ej);
            }();
            py::dict d;
            d["t_star"] = r.report.t_star;
            d["t_phase"] = r.report.t_phase;
            d["fidelity"] = r.report.fidelity_max;
            d["times"] = r.report.times;
            d["population_difference"] = r.report.population_difference;
            return d;
        },
        py::arg("N"), py::arg("u_over_ej") = 10.0, "Tunneling plus phase-correction synthesis of the singlet.");

    m.def(
        "singlet_estimator", [](std::size_t N) { return singlet_state(N).expectation(estimator_operator(WellPair::fixed(N / 2))).real(); },
        py::arg("N"), "<O> of the singlet at t = 0.");

    m.def("analytic_uncertainty", &analytic_uncertainty, py::arg("N"), py::arg("phi_D"));
    m.def("heisenberg_minimum", &heisenberg_minimum, py::arg("N"));
    m.def("cramer_rao_bound", &cramer_rao_bound, py::arg("N"));
    m.def("sql_baseline", &sql_baseline, py::arg("N"));
    m.def("field_from_coupling", &field_from_coupling, py::arg("omega"), py::arg("omega_ref_hz"));

    m.def("recipes", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& r : recipes()) out.emplace_back(r.name, r.description);
        return out;
    });

    m.def(
        "run_recipe",
        [](const std::string& config_json, const std::string& output_dir) {
            ExperimentConfig c = config_from_json(nlohmann::json::parse(config_json));
            c.output_dir = output_dir;
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run(c);
            }
            std::vector<std::string> files;
            for (const auto& f : r.files) files.push_back(f.string());
            return py::make_tuple(files, r.verified_ok());
        },
        py::arg("config_json"), py::arg("output_dir"),
        "Run a recipe from a JSON config string; returns (files, verified_ok).");

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
