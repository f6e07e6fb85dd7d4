#include "commands.hpp"

#include "mfgp/error.hpp"
#include "mfgp/metrics.hpp"
#include "mfgp/nonsep.hpp"
#include "mfgp/sep.hpp"
#include "mfgp/testbed.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace mfgp;

namespace {

MultifidelityDataset make_dataset(const std::vector<Matrix>& designs, const std::vector<Matrix>& outputs,
                                  const Matrix& locations) {
    if (designs.size() != outputs.size()) {
        throw InvalidArgument("designs and outputs need one entry per level");
    }
    MultifidelityDataset data;
    for (std::size_t t = 0; t < designs.size(); ++t) {
        data.levels.push_back({designs[t], outputs[t], {}});
    }
    data.locations = locations;
    data.validate();
    data.input_bounds = data.effective_bounds();
    return data;
}

ChainSettings chain(int iterations, int burn_in, std::uint64_t seed) {
    ChainSettings s;
    s.iterations = iterations;
    s.burn_in = burn_in;
    s.seed = seed;
    s.validate();
    return s;
}

py::dict summary_dict(const PredictiveSummary& s) {
    py::dict d;
    d["mean"] = s.mean;
    d["q025"] = s.q025;
    d["q975"] = s.q975;
    d["agg_mean"] = s.agg_mean;
    d["agg_q025"] = s.agg_q025;
    d["agg_q975"] = s.agg_q975;
    return d;
}

PredictiveSummary summary_from(const py::dict& d) {
    PredictiveSummary s;
    s.mean = d["mean"].cast<Matrix>();
    s.q025 = d["q025"].cast<Matrix>();
    s.q975 = d["q975"].cast<Matrix>();
    s.agg_mean = d["agg_mean"].cast<Vector>();
    s.agg_q025 = d["agg_q025"].cast<Vector>();
    s.agg_q975 = d["agg_q975"].cast<Vector>();
    return s;
}

std::vector<std::vector<double>> thetas_of(const sep::SepPosterior& p) {
    std::vector<std::vector<double>> out;
    for (const auto& lv : p.levels) {
        out.push_back(lv.theta_map.ranges);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multifidelity Gaussian process emulators for spatial simulator output";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("hi_fidelity", [](double M, double D, double L, double T, double s1, double s2) {
        return testbed::hi_fidelity({M, D, L, T}, s1, s2);
    }, py::arg("M"), py::arg("D"), py::arg("L"), py::arg("T"), py::arg("s1"), py::arg("s2"));
    m.def("lo_fidelity", [](double M, double D, double L, double T, double s1, double s2, const std::string& form) {
        return testbed::lo_fidelity({M, D, L, T}, s1, s2, testbed::low_fidelity_form_from_string(form));
    }, py::arg("M"), py::arg("D"), py::arg("L"), py::arg("T"), py::arg("s1"), py::arg("s2"),
       py::arg("form") = "reciprocal");

    m.def("generate_testbed", [](std::uint64_t seed, const std::string& sizes) {
        const auto sz = sizes == "desk" ? testbed::ExperimentSizes::desk() : testbed::ExperimentSizes::paper();
        const auto ex = testbed::generate_experiment(seed, sz);
        py::dict d;
        py::list designs, outputs;
        for (const auto& lv : ex.data.levels) {
            designs.append(lv.X);
            outputs.append(lv.Y);
        }
        d["designs"] = designs;
        d["outputs"] = outputs;
        d["locations"] = ex.data.locations;
        d["X_test"] = ex.X_test;
        d["Y_test"] = ex.Y_test;
        return d;
    }, py::arg("seed"), py::arg("sizes") = "paper");

    py::class_<sep::SepPosterior>(m, "SepFit")
        .def_property_readonly("theta_map", &thetas_of)
        .def_property_readonly("warnings", [](const sep::SepPosterior& p) { return p.warnings; })
        .def("predict_mean", [](const sep::SepPosterior& p, const Vector& x0) { return sep::predict_mean(x0, p).back(); },
             py::arg("x0"))
        .def("predict", [](const sep::SepPosterior& p, const Matrix& X0, int samples, std::uint64_t seed, int threads) {
            sep::SummaryOptions o;
            o.samples_per_input = samples;
            o.seed = seed;
            o.threads = threads;
            PredictiveSummary s;
            {
                py::gil_scoped_release release;
                s = sep::predictive_summary(X0, p, o);
            }
            return summary_dict(s);
        }, py::arg("X0"), py::arg("samples") = 1000, py::arg("seed") = 1, py::arg("threads") = 1);

    m.def("fit_sep", [](const std::vector<Matrix>& designs, const std::vector<Matrix>& outputs, const Matrix& locations,
                        int neighbors_p, int iterations, int burn_in, std::uint64_t seed, int threads) {
        const auto data = make_dataset(designs, outputs, locations);
        auto c = sep::SepConfig::defaults(data.num_levels(), data.input_bounds);
        c.neighbors_p = neighbors_p;
        c.validate(data);
        const auto s = chain(iterations, burn_in, seed);
        py::gil_scoped_release release;
        return sep::fit(data, c, s, threads);
    }, py::arg("designs"), py::arg("outputs"), py::arg("locations"), py::arg("neighbors_p") = 1,
       py::arg("iterations") = 3000, py::arg("burn_in") = 300, py::arg("seed") = 1, py::arg("threads") = 1);

    py::class_<nonsep::NonsepPosterior>(m, "NonsepFit")
        .def_property_readonly("explained", [](const nonsep::NonsepPosterior& p) {
            std::vector<Vector> out;
            for (const auto& lv : p.levels) {
                out.push_back(lv.basis.explained);
            }
            return out;
        })
        .def("predict_mean", [](const nonsep::NonsepPosterior& p, const Vector& x0) { return nonsep::predict_mean(x0, p); },
             py::arg("x0"))
        .def("predict", [](const nonsep::NonsepPosterior& p, const Matrix& X0, int samples, std::uint64_t seed,
                           int threads) {
            nonsep::SummaryOptions o;
            o.samples_per_input = samples;
            o.seed = seed;
            o.threads = threads;
            PredictiveSummary s;
            {
                py::gil_scoped_release release;
                s = nonsep::predictive_summary(X0, p, o);
            }
            return summary_dict(s);
        }, py::arg("X0"), py::arg("samples") = 1000, py::arg("seed") = 1, py::arg("threads") = 1);

    m.def("fit_nonsep", [](const std::vector<Matrix>& designs, const std::vector<Matrix>& outputs,
                           const Matrix& locations, int components, int iterations, int burn_in, std::uint64_t seed,
                           int threads) {
        const auto data = make_dataset(designs, outputs, locations);
        const auto c = nonsep::NonsepConfig::defaults(data.num_levels(), data.input_bounds, components);
        c.validate(data);
        const auto s = chain(iterations, burn_in, seed);
        py::gil_scoped_release release;
        return nonsep::fit(data, c, s, threads);
    }, py::arg("designs"), py::arg("outputs"), py::arg("locations"), py::arg("components") = 8,
       py::arg("iterations") = 3000, py::arg("burn_in") = 300, py::arg("seed") = 1, py::arg("threads") = 1);

    m.def("compute_metrics", [](const Matrix& truth, const py::dict& summary) {
        const auto r = compute_metrics(truth, summary_from(summary));
        py::dict d;
        d["rmspe"] = r.rmspe_marginal;
        d["cvg95"] = r.cvg95_marginal;
        d["alci95"] = r.alci95_marginal;
        d["rmspe_agg"] = r.rmspe_agg;
        d["cvg95_agg"] = r.cvg95_agg;
        d["alci95_agg"] = r.alci95_agg;
        return d;
    }, py::arg("truth"), py::arg("summary"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
