#include "ssann/cli.hpp"
#include "ssann/curriculum.hpp"
#include "ssann/errors.hpp"
#include "ssann/forecast.hpp"
#include "ssann/io.hpp"
#include "ssann/mlp.hpp"
#include "ssann/series.hpp"
#include "ssann/ssa.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ssann;

namespace {

mlp::TrainConfig train_config(std::size_t epochs, double learning_rate, double momentum, std::size_t patience) {
    mlp::TrainConfig c;
    c.epochs = epochs;
    c.learning_rate = learning_rate;
    c.momentum = momentum;
    c.patience = patience;
    return c;
}

curriculum::RunSettings run_settings(std::size_t window, std::size_t embedding, std::size_t hidden,
                                     std::uint64_t seed) {
    curriculum::RunSettings s;
    s.window = window;
    s.embedding = embedding;
    s.hidden = hidden;
    s.seed = seed;
    return s;
}

py::list trace_list(const std::vector<mlp::EpochRecord>& trace) {
    py::list out;
    for (const auto& r : trace) out.append(py::make_tuple(r.epoch, r.train_mse, r.validation_mse));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Singular spectrum analysis and curriculum-trained neural forecasting";

    // SsannError subclasses ValueError and carries the error kind name.
    static py::handle error_type = py::exception<Error>(m, "SsannError", PyExc_ValueError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<mlp::Network>(m, "Network")
        .def_property_readonly("input_dim", &mlp::Network::input_dim)
        .def_property_readonly("hidden_dim", &mlp::Network::hidden_dim)
        .def_readwrite("values", &mlp::Network::values)
        .def("to_json", [](const mlp::Network& n) { return io::network_to_json(n).dump(2); })
        .def_static("from_json",
                    [](const std::string& text) { return io::network_from_json(nlohmann::json::parse(text)); })
        .def("__eq__", [](const mlp::Network& a, const mlp::Network& b) { return a == b; });

    m.def("standardize", [](const std::vector<double>& x) {
        const auto s = standardize(x);
        return py::make_tuple(s.values, s.mean, s.scale);
    }, py::arg("values"), "Returns (standardized values, mean, scale).");

    m.def("lag_correlation", [](const std::vector<double>& x, std::size_t window) {
        return ssa::lag_correlation(x, window).lags;
    }, py::arg("series"), py::arg("window"));

    m.def("decompose", [](const std::vector<double>& x, std::size_t window) {
        const auto d = ssa::decompose(x, window);
        py::dict out;
        out["lags"] = d.correlation.lags;
        out["eigenvalues"] = d.spectrum.eigenvalues;
        out["eigenvectors"] = d.spectrum.eigenvectors;
        out["eigensolver"] = std::string(ssa::to_string(d.spectrum.solver));
        out["pcs"] = d.components.pcs;
        out["rcs"] = d.components.rcs;
        out["completeness_error"] = ssa::completeness_error(d.components, x);
        return out;
    }, py::arg("series"), py::arg("window"));

    m.def("partial_reconstruction", [](const std::vector<double>& x, std::size_t window, std::size_t p) {
        return ssa::partial_reconstruction(ssa::decompose(x, window).components, p);
    }, py::arg("series"), py::arg("window"), py::arg("components"));

    m.def("init_network", &mlp::init_network, py::arg("input_dim"), py::arg("hidden_dim"), py::arg("seed"));
    m.def("forward", [](const mlp::Network& net, const std::vector<double>& x) { return mlp::forward(net, x); },
          py::arg("network"), py::arg("input"));

    m.def("curriculum_train",
          [](const std::vector<double>& x, std::size_t window, std::size_t embedding, std::size_t hidden,
             std::size_t pc_step, std::size_t epochs, double learning_rate, double momentum, std::size_t patience,
             std::uint64_t seed) {
              const auto schedule =
                  curriculum::default_schedule(window, pc_step, train_config(epochs, learning_rate, momentum, patience));
              const auto r = curriculum::curriculum_train(x, run_settings(window, embedding, hidden, seed), schedule);
              py::list traces;
              for (const auto& t : r.stage_traces) traces.append(trace_list(t));
              py::dict out;
              out["network"] = r.final_state.network;
              out["initial_network"] = r.initial_network;
              out["train_mse"] = r.final_state.train_mse;
              out["validation_mse"] = r.final_state.validation_mse;
              out["stage_traces"] = traces;
              out["epoch_budget"] = schedule.epoch_budget();
              return out;
          },
          py::arg("series"), py::arg("window") = 35, py::arg("embedding") = 5, py::arg("hidden") = 10,
          py::arg("pc_step") = 2, py::arg("epochs") = 5000, py::arg("learning_rate") = 0.01,
          py::arg("momentum") = 0.9, py::arg("patience") = 200, py::arg("seed") = 1);

    m.def("baseline_train",
          [](const std::vector<double>& x, std::size_t window, std::size_t embedding, std::size_t hidden,
             std::size_t epochs, double learning_rate, double momentum, std::size_t patience, std::uint64_t seed) {
              const auto r = curriculum::baseline_train(x, run_settings(window, embedding, hidden, seed),
                                                        train_config(epochs, learning_rate, momentum, patience));
              py::dict out;
              out["network"] = r.training.state.network;
              out["initial_network"] = r.initial_network;
              out["train_mse"] = r.training.state.train_mse;
              out["validation_mse"] = r.training.state.validation_mse;
              out["trace"] = trace_list(r.training.trace);
              out["stop_reason"] = std::string(mlp::to_string(r.training.stop_reason));
              return out;
          },
          py::arg("series"), py::arg("window") = 35, py::arg("embedding") = 5, py::arg("hidden") = 10,
          py::arg("epochs") = 5000, py::arg("learning_rate") = 0.01, py::arg("momentum") = 0.9,
          py::arg("patience") = 200, py::arg("seed") = 1);

    m.def("multi_step_predict", [](const mlp::Network& net, const std::vector<double>& seed_window,
                                   std::size_t horizon) {
        return forecast::multi_step_predict(net, seed_window, horizon);
    }, py::arg("network"), py::arg("seed_window"), py::arg("horizon"));

    m.def("evaluate", [](const std::vector<double>& predictions, const std::vector<double>& actual) {
        const auto r = forecast::evaluate(predictions, actual);
        return py::make_tuple(r.rmse, r.nrmse);
    }, py::arg("predictions"), py::arg("actual"), "Returns (rmse, nrmse).");

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs a CLI subcommand in process. Returns (exit code, stdout, stderr).");
}
