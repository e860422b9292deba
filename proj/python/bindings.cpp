#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hawkscan/bench.hpp"
#include "hawkscan/cusum.hpp"
#include "hawkscan/em.hpp"
#include "hawkscan/experiments.hpp"
#include "hawkscan/fisher.hpp"
#include "hawkscan/io.hpp"
#include "hawkscan/likelihood.hpp"
#include "hawkscan/score.hpp"
#include "hawkscan/simulator.hpp"

namespace py = pybind11;
using namespace hawkscan;

namespace {

std::vector<Event> to_events(const std::vector<double>& times,
                             const std::vector<int>& nodes) {
  if (times.size() != nodes.size()) {
    throw std::invalid_argument("times and nodes differ in length");
  }
  std::vector<Event> out(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) out[k] = {times[k], nodes[k]};
  return out;
}

py::tuple from_events(const std::vector<Event>& events) {
  py::array_t<double> t(static_cast<py::ssize_t>(events.size()));
  py::array_t<int> u(static_cast<py::ssize_t>(events.size()));
  auto tv = t.mutable_unchecked<1>();
  auto uv = u.mutable_unchecked<1>();
  for (std::size_t k = 0; k < events.size(); ++k) {
    tv(static_cast<py::ssize_t>(k)) = events[k].t;
    uv(static_cast<py::ssize_t>(k)) = events[k].u;
  }
  return py::make_tuple(t, u);
}

py::dict outcome_dict(const DetectionOutcome& o) {
  std::vector<double> t, s, tau;
  for (const auto& step : o.trajectory) {
    t.push_back(step.t);
    s.push_back(step.statistic);
    tau.push_back(step.tau_hat);
  }
  py::dict d;
  d["alarmed"] = o.alarmed;
  d["stop_time"] = o.alarmed ? py::object(py::float_(o.stop_time)) : py::none();
  d["tau_hat"] = std::isnan(o.tau_hat) ? py::none() : py::object(py::float_(o.tau_hat));
  d["events_seen"] = o.events_seen;
  d["last_time"] = o.last_time;
  d["t"] = py::array(py::cast(t));
  d["statistic"] = py::array(py::cast(s));
  d["tau_hat_path"] = py::array(py::cast(tau));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Change-point detection for multivariate Hawkes processes";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::domain_error& e) {
      PyErr_SetString(PyExc_ArithmeticError, e.what());
    }
  });

  py::class_<Kernel>(m, "Kernel")
      .def_static("exponential", &Kernel::exponential, py::arg("beta"),
                  py::arg("truncation") = std::nullopt)
      .def_static("tabulated", &Kernel::tabulated, py::arg("grid"), py::arg("values"),
                  py::arg("truncation") = std::nullopt)
      .def("density", &Kernel::density)
      .def("cumulative", &Kernel::cumulative)
      .def_property_readonly("beta", &Kernel::beta)
      .def_property_readonly("truncation", &Kernel::truncation);

  py::class_<HawkesModel>(m, "HawkesModel")
      .def(py::init<Eigen::VectorXd, Eigen::MatrixXd, Kernel>(), py::arg("mu"),
           py::arg("a"), py::arg("kernel"))
      .def_property_readonly("dim", &HawkesModel::dim)
      .def_property_readonly("mu", &HawkesModel::mu)
      .def_property_readonly("a", &HawkesModel::influence)
      .def_property_readonly("kernel", &HawkesModel::common_kernel)
      .def("with_influence", &HawkesModel::with_influence)
      .def("validate", &validate_model)
      .def("to_json", &model_to_json)
      .def_static("from_json", &parse_model);

  m.def("load_model", &load_model);
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));

  m.def(
      "simulate",
      [](const HawkesModel& model, double horizon, std::uint64_t seed,
         const std::optional<HawkesModel>& post, double kappa) {
        EventStream s;
        {
          py::gil_scoped_release release;
          s = post ? simulate_with_change({model, *post, kappa}, {horizon, seed})
                   : simulate(model, {horizon, seed});
        }
        return from_events(s.events);
      },
      py::arg("model"), py::arg("horizon"), py::arg("seed") = 0,
      py::arg("post") = std::nullopt, py::arg("kappa") = 0.0,
      "Simulate on [0, horizon]; returns (times, nodes). With post, the law "
      "switches at kappa.");

  m.def(
      "log_likelihood",
      [](const HawkesModel& model, const std::vector<double>& times,
         const std::vector<int>& nodes, double a, double b, double history_start) {
        return log_likelihood(model, to_events(times, nodes), a, b, history_start);
      },
      py::arg("model"), py::arg("times"), py::arg("nodes"), py::arg("a"), py::arg("b"),
      py::arg("history_start") = 0.0);

  m.def(
      "llr",
      [](const HawkesModel& pre, const HawkesModel& post, const std::vector<double>& times,
         const std::vector<int>& nodes, double tau, double t) {
        return llr_at(pre, post, to_events(times, nodes), tau, t);
      },
      py::arg("pre"), py::arg("post"), py::arg("times"), py::arg("nodes"), py::arg("tau"),
      py::arg("t"));

  m.def("mean_field_intensity", &mean_field_intensity);
  m.def("kl_mean_field", &kl_mean_field, py::arg("pre"), py::arg("post"));

  m.def(
      "detect",
      [](const std::string& method, const HawkesModel& pre,
         const std::vector<double>& times, const std::vector<int>& nodes, double horizon,
         double threshold, double grid, const std::optional<HawkesModel>& post,
         std::optional<double> truncation, double window,
         const std::optional<Eigen::MatrixXd>& fisher_inverse, double lower) {
        DetectorSpec spec;
        spec.method = parse_method(method);
        spec.pre = std::make_shared<const HawkesModel>(pre);
        if (post) spec.post = std::make_shared<const HawkesModel>(*post);
        spec.threshold = threshold;
        spec.grid = grid;
        spec.truncation = truncation;
        spec.window = window;
        if (fisher_inverse) spec.fisher_inverse = *fisher_inverse;
        spec.lower = lower;
        const auto events = to_events(times, nodes);
        DetectionOutcome o;
        {
          py::gil_scoped_release release;
          auto det = make_detector(spec);
          o = run_detector(*det, events, horizon);
        }
        return outcome_dict(o);
      },
      py::arg("method"), py::arg("pre"), py::arg("times"), py::arg("nodes"),
      py::arg("horizon"), py::arg("threshold"), py::arg("grid") = 0.1,
      py::arg("post") = std::nullopt, py::arg("truncation") = std::nullopt,
      py::arg("window") = 60.0, py::arg("fisher_inverse") = std::nullopt,
      py::arg("lower") = 0.0,
      "Run a cusum, score, glr or shewhart detector over a recorded stream.");

  m.def(
      "score_vector",
      [](const HawkesModel& pre, const std::vector<double>& times,
         const std::vector<int>& nodes, double a, double b) {
        return score_vector(pre, to_events(times, nodes), a, b);
      },
      py::arg("pre"), py::arg("times"), py::arg("nodes"), py::arg("a"), py::arg("b"));

  m.def(
      "fisher_information",
      [](const HawkesModel& model, double window, double burn_in, std::size_t reps,
         std::uint64_t seed, unsigned workers) {
        py::gil_scoped_release release;
        return fisher_info_mc(model, burn_in + window, window, reps, seed, workers);
      },
      py::arg("model"), py::arg("window") = 200.0, py::arg("burn_in") = 100.0,
      py::arg("reps") = 1000, py::arg("seed") = 0, py::arg("workers") = 0);

  m.def("regularized_inverse", &regularized_inverse, py::arg("m"), py::arg("ridge") = 0.0);

  m.def(
      "em_fit",
      [](const std::vector<double>& times, const std::vector<int>& nodes, double a,
         double b, double beta, const Eigen::VectorXd& mu, bool fit_mu, double tol,
         int max_iter) {
        EmConfig cfg;
        cfg.tol = tol;
        cfg.max_iter = max_iter;
        cfg.fit_mu = fit_mu;
        const auto r =
            em_mle(to_events(times, nodes), a, b, Kernel::exponential(beta), mu, cfg);
        py::dict d;
        d["a"] = r.a;
        d["mu"] = r.mu;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        d["log_likelihood"] = r.log_likelihood;
        d["trace"] = r.trace;
        return d;
      },
      py::arg("times"), py::arg("nodes"), py::arg("a"), py::arg("b"), py::arg("beta"),
      py::arg("mu"), py::arg("fit_mu") = false, py::arg("tol") = 1e-4,
      py::arg("max_iter") = 1000,
      "EM estimate of the influence matrix on the window (a, b].");

  m.def(
      "reproduce",
      [](const std::string& experiment, const std::string& out_dir, std::uint64_t seed,
         double scale, unsigned workers) {
        py::gil_scoped_release release;
        return reproduce({experiment, seed, scale, out_dir, workers});
      },
      py::arg("experiment"), py::arg("out_dir") = ".", py::arg("seed") = 1,
      py::arg("scale") = 1.0, py::arg("workers") = 0);
  m.def("experiment_names", &experiment_names);
}
