#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "spde/cli.hpp"
#include "spde/config.hpp"
#include "spde/densities.hpp"
#include "spde/errors.hpp"
#include "spde/feynman_kac.hpp"
#include "spde/fokker_planck.hpp"
#include "spde/spectral_oracle.hpp"

namespace py = pybind11;
using namespace spde;

namespace {

// Leaked on purpose: these must outlive interpreter shutdown.
py::handle py_error, py_validation_error, py_numerical_error;

std::pair<std::vector<std::string>, std::vector<std::vector<std::string>>> as_pair(const CsvTable& t) {
    return {t.header, t.rows};
}

template <class M>
M checked(const M& model) {
    return validate(model);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Closed-form densities and CSV jobs for linear and KPZ-type SPDEs";

    py_error = py::exception<Error>(mod, "Error", PyExc_RuntimeError).release();
    py_validation_error = py::exception<InvalidParameter>(mod, "ValidationError", py_error.ptr()).release();
    py_numerical_error = py::exception<DegenerateLaw>(mod, "NumericalError", py_error.ptr()).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const auto& target = e.category() == ErrorCategory::Validation ? py_validation_error : py_numerical_error;
            py::object exc = target(e.what());
            exc.attr("kind") = e.kind();
            PyErr_SetObject(target.ptr(), exc.ptr());
        }
    });

    py::class_<LogNormalLaw>(mod, "LogNormalLaw")
        .def(py::init<>())
        .def(py::init([](double mean, double variance) { return LogNormalLaw{mean, variance}; }), py::arg("log_mean"),
             py::arg("log_variance"))
        .def_readwrite("log_mean", &LogNormalLaw::log_mean)
        .def_readwrite("log_variance", &LogNormalLaw::log_variance);

    py::class_<MultiplicativeModel>(mod, "MultiplicativeModel")
        .def(py::init<>())
        .def_readwrite("a", &MultiplicativeModel::a)
        .def_readwrite("b", &MultiplicativeModel::b)
        .def_readwrite("c", &MultiplicativeModel::c)
        .def_readwrite("alpha", &MultiplicativeModel::alpha)
        .def_readwrite("epsilon", &MultiplicativeModel::epsilon)
        .def_readwrite("m", &MultiplicativeModel::m)
        .def_readwrite("q_m", &MultiplicativeModel::q_m)
        .def_readwrite("initial", &MultiplicativeModel::initial)
        .def_readwrite("deterministic_initial", &MultiplicativeModel::deterministic_initial)
        .def_property_readonly("b_m", &MultiplicativeModel::b_m)
        .def_property_readonly("lambda_m", &MultiplicativeModel::lambda_m);

    py::class_<Window>(mod, "Window")
        .def(py::init([](double lo, double hi) { return Window{lo, hi}; }), py::arg("lo"), py::arg("hi"))
        .def_readwrite("lo", &Window::lo)
        .def_readwrite("hi", &Window::hi);

    py::class_<KpzModel>(mod, "KpzModel")
        .def(py::init<>())
        .def_readwrite("theta", &KpzModel::theta)
        .def_readwrite("xi", &KpzModel::xi)
        .def_readwrite("epsilon", &KpzModel::epsilon)
        .def_readwrite("m", &KpzModel::m)
        .def_readwrite("q_m", &KpzModel::q_m)
        .def_readwrite("initial", &KpzModel::initial)
        .def_readwrite("window", &KpzModel::window)
        .def_property_readonly("b_tilde", &KpzModel::b_tilde)
        .def_property_readonly("scale", &KpzModel::scale);

    mod.def("multiplicative_log_mean", [](double t, double x, const MultiplicativeModel& m) {
        return multiplicative_log_mean(t, x, checked(m));
    });
    mod.def("multiplicative_log_variance", [](double t, const MultiplicativeModel& m) {
        return multiplicative_log_variance(t, checked(m));
    });
    mod.def("multiplicative_pdf", [](double u, double t, double x, const MultiplicativeModel& m) {
        return multiplicative_pdf(u, t, x, checked(m));
    });
    mod.def("dirac_limit_mass", [](double t, double x, double delta, const MultiplicativeModel& m) {
        return dirac_limit_mass(t, x, delta, checked(m));
    });
    mod.def("multiplicative_fp_coefficients", [](const MultiplicativeModel& m) {
        const auto c = multiplicative_fp_coefficients(checked(m));
        return py::make_tuple(c.A, c.B, c.C);
    });
    mod.def("kpz_mean", [](double t, double x, const KpzModel& m) { return kpz_mean(t, x, checked(m)); });
    mod.def("kpz_variance", [](double t, const KpzModel& m) { return kpz_variance(t, checked(m)); });
    mod.def("kpz_pdf", [](double k, double t, double x, const KpzModel& m) { return kpz_pdf(k, t, x, checked(m)); });
    mod.def("kpz_fk_coefficients", [](const KpzModel& m) {
        const auto c = kpz_fk_coefficients(checked(m));
        return py::make_tuple(c.drift, c.diffusion);
    });
    mod.def("ks_critical_value", &ks_critical_value, py::arg("n"));

    py::class_<Scenario>(mod, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("outputs", &Scenario::outputs)
        .def_property_readonly("kind", [](const Scenario& s) {
            static const char* names[] = {"additive", "multiplicative", "kpz"};
            return std::string(names[s.model.index()]);
        });

    mod.def("parse_config", &parse_config, py::arg("text"), py::arg("origin") = "<config>");
    mod.def("load_config", &load_config, py::arg("path"));
    mod.def("bundled_scenarios", &bundled_scenarios);
    mod.def("bundled_scenario_text", [](const std::string& name) {
        auto text = bundled_scenario_text(name);
        if (!text) throw py::key_error(name);
        return *text;
    });

    // Tables come back as (header, rows) with the cells exactly as the CLI writes them.
    mod.def("density_table", [](const Scenario& s) { return as_pair(density_table(s)); });
    mod.def("ck_table", [](const Scenario& s) { return as_pair(ck_table(s)); });
    mod.def(
        "fk_table",
        [](const Scenario& s, std::uint64_t seed, int threads) {
            py::gil_scoped_release release;
            return as_pair(fk_table(s, {seed, threads}));
        },
        py::arg("scenario"), py::arg("seed") = 0, py::arg("threads") = 0);
    mod.def(
        "oracle_table",
        [](const Scenario& s, std::uint64_t seed, int threads) {
            py::gil_scoped_release release;
            return as_pair(oracle_table(s, {seed, threads}));
        },
        py::arg("scenario"), py::arg("seed") = 0, py::arg("threads") = 0);
    mod.def(
        "residual_table",
        [](const Scenario& s, std::uint64_t seed) { return as_pair(residual_table(s, {seed, 0})); },
        py::arg("scenario"), py::arg("seed") = 0);

    mod.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "spde-density");
            std::vector<char*> argv;
            for (auto& a : args) argv.push_back(a.data());
            return run_cli(static_cast<int>(argv.size()), argv.data());
        },
        py::arg("args"));
}
