#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "landmarkbm/classifier.hpp"
#include "landmarkbm/distance_sde.hpp"
#include "landmarkbm/experiments.hpp"
#include "landmarkbm/geometry.hpp"
#include "landmarkbm/simulator.hpp"

namespace py = pybind11;
namespace lbm = landmarkbm;

namespace {

lbm::LandmarkConfig to_config(const Eigen::MatrixXd& points) {
  // one row per landmark
  Eigen::VectorXd flat(points.size());
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index c = 0; c < points.cols(); ++c) flat[i * points.cols() + c] = points(i, c);
  return {static_cast<int>(points.cols()), std::move(flat)};
}

py::dict classification_dict(const lbm::SingularityClassification& c) {
  py::dict d;
  d["kind"] = std::string(lbm::to_string(c.kind));
  d["collision_possible"] = c.collision_possible;
  d["brownian_complete"] = c.brownian_complete;
  d["notes"] = c.notes;
  return d;
}

py::dict stop_dict(const lbm::StopRecord& s) {
  py::dict d;
  d["reason"] = std::string(lbm::to_string(s.reason));
  d["step"] = s.step;
  d["min_distance"] = s.min_distance;
  d["max_norm"] = s.max_norm;
  d["diagnostic"] = s.diagnostic;
  return d;
}

}  // namespace

PYBIND11_MODULE(_landmarkbm, m) {
  m.doc() = "Brownian motion on kernel landmark spaces";

  py::register_exception<lbm::DegenerateConfiguration>(m, "DegenerateConfiguration", PyExc_ValueError);
  py::register_exception<lbm::ExperimentIoError>(m, "ExperimentIoError", PyExc_OSError);

  py::class_<lbm::AsymptoticData>(m, "AsymptoticData")
      .def_readonly("D", &lbm::AsymptoticData::D)
      .def_readonly("gamma", &lbm::AsymptoticData::gamma)
      .def_readonly("has_log", &lbm::AsymptoticData::has_log);

  py::class_<lbm::RadialKernel>(m, "RadialKernel")
      .def(py::init([](const std::string& spec) { return lbm::parse_kernel(spec); }), py::arg("spec"))
      .def_property_readonly("spec", &lbm::RadialKernel::spec)
      .def_property_readonly("lam", &lbm::RadialKernel::lambda)
      .def_property_readonly("scale", &lbm::RadialKernel::scale)
      .def_property_readonly("asymptotics", &lbm::RadialKernel::asymptotics)
      .def("__call__", &lbm::RadialKernel::eval, py::arg("r"))
      .def("derivative", &lbm::RadialKernel::eval_derivative, py::arg("r"))
      .def("gap", &lbm::RadialKernel::gap, py::arg("r"))
      .def("__repr__", [](const lbm::RadialKernel& k) { return "RadialKernel('" + k.spec() + "')"; });

  m.def("classify", [](double gamma, bool has_log, int dim) {
    return classification_dict(lbm::classify(gamma, has_log, dim));
  }, py::arg("gamma"), py::arg("has_log") = false, py::arg("dim") = 1);

  m.def("classify_kernel", [](const std::string& spec, int dim) {
    return classification_dict(lbm::classify(lbm::parse_kernel(spec).asymptotics(), dim));
  }, py::arg("kernel"), py::arg("dim") = 1);

  m.def("classify_numerically", [](const std::string& spec, int dim, double anchor) {
    const auto r = lbm::classify_numerically(lbm::parse_kernel(spec), dim, anchor);
    py::dict d;
    d["inconclusive"] = r.inconclusive;
    d["classification"] = r.classification ? py::object(classification_dict(*r.classification)) : py::none();
    py::list tests;
    for (const auto& t : r.tests) {
      py::dict td;
      td["name"] = t.name;
      td["slope"] = t.first_order.slope;
      td["verdict"] = std::string(lbm::to_string(t.verdict));
      tests.append(td);
    }
    d["tests"] = tests;
    return d;
  }, py::arg("kernel"), py::arg("dim") = 1, py::arg("anchor") = 1.0);

  m.def("distance_drift", [](const std::string& spec, int dim, double r, bool radial_term) {
    return lbm::drift({lbm::parse_kernel(spec), dim, radial_term}, r);
  }, py::arg("kernel"), py::arg("dim"), py::arg("r"), py::arg("radial_term") = false);

  m.def("distance_sigma", [](const std::string& spec, int dim, double r) {
    return lbm::sigma({lbm::parse_kernel(spec), dim}, r);
  }, py::arg("kernel"), py::arg("dim"), py::arg("r"));

  m.def("simulate_distance", [](const std::string& spec, int dim, double r0, double t_max,
                                std::size_t steps, std::size_t paths, std::uint64_t seed,
                                std::optional<double> absorb_eps, bool radial_term) {
    lbm::DistanceSdeParams p;
    p.r0 = r0;
    p.t_max = t_max;
    p.steps = steps;
    p.paths = paths;
    p.seed = seed;
    p.absorb_eps = absorb_eps;
    std::vector<lbm::DistancePath> ens;
    {
      py::gil_scoped_release release;
      ens = lbm::simulate_distance({lbm::parse_kernel(spec), dim, radial_term}, p);
    }
    py::list out;
    for (const auto& path : ens) {
      py::dict d;
      d["values"] = py::array_t<double>(static_cast<py::ssize_t>(path.values.size()), path.values.data());
      d["absorbed_at"] = path.absorbed_at ? py::object(py::int_(*path.absorbed_at)) : py::none();
      out.append(d);
    }
    return out;
  }, py::arg("kernel"), py::arg("dim") = 1, py::arg("r0") = 1.0, py::arg("t_max") = 1.0,
     py::arg("steps") = 10000, py::arg("paths") = 1, py::arg("seed") = 0,
     py::arg("absorb_eps") = std::nullopt, py::arg("radial_term") = false);

  m.def("cometric_matrix", [](const Eigen::MatrixXd& points, const std::string& spec) {
    return lbm::cometric_matrix(to_config(points), lbm::parse_kernel(spec)).matrix();
  }, py::arg("points"), py::arg("kernel"));

  m.def("brownian_drift", [](const Eigen::MatrixXd& points, const std::string& spec) {
    return Eigen::VectorXd(lbm::brownian_drift(to_config(points), lbm::parse_kernel(spec)));
  }, py::arg("points"), py::arg("kernel"));

  m.def("sqrt_psd", [](const Eigen::MatrixXd& mat) {
    return lbm::sqrt_psd(lbm::SymMatrix(mat)).matrix();
  }, py::arg("matrix"));

  m.def("em_step", [](const Eigen::MatrixXd& points, const std::string& spec, double dt,
                      const std::vector<double>& noise) {
    const auto next = lbm::em_step(to_config(points), lbm::parse_kernel(spec), dt, noise);
    return Eigen::MatrixXd(next.flat().reshaped<Eigen::RowMajor>(next.count(), next.dim()));
  }, py::arg("points"), py::arg("kernel"), py::arg("dt"), py::arg("noise"));

  m.def("min_pairwise_distance", [](const Eigen::MatrixXd& points) {
    return lbm::min_pairwise_distance(to_config(points));
  }, py::arg("points"));

  m.def("simulate", [](const Eigen::MatrixXd& points, const std::string& spec, double t_max,
                       std::size_t steps, std::size_t paths, std::uint64_t seed) {
    lbm::SimulationParams p;
    p.kernel = lbm::parse_kernel(spec);
    p.initial = to_config(points);
    p.t_max = t_max;
    p.steps = steps;
    p.paths = paths;
    p.seed = seed;
    lbm::TrajectoryEnsemble ens;
    {
      py::gil_scoped_release release;
      ens = lbm::simulate(p);
    }
    py::list out;
    for (const auto& path : ens.paths) {
      py::dict d;
      d["min_distance"] =
          py::array_t<double>(static_cast<py::ssize_t>(path.min_distance.size()), path.min_distance.data());
      d["stop"] = stop_dict(path.stop);
      out.append(d);
    }
    return out;
  }, py::arg("points"), py::arg("kernel"), py::arg("t_max") = 1.0, py::arg("steps") = 10000,
     py::arg("paths") = 1, py::arg("seed") = 0);

  m.def("preset_names", &lbm::preset_names);
  m.def("preset_config", [](const std::string& name) {
    return lbm::format_experiment_config(lbm::preset(name));
  }, py::arg("name"));

  m.def("run_experiment", [](const std::string& config_text, const std::string& outdir) {
    auto spec = lbm::parse_experiment_config(config_text);
    if (!outdir.empty()) spec.outdir = outdir;
    lbm::ExperimentResult result;
    {
      py::gil_scoped_release release;
      result = lbm::run_experiment(spec);
    }
    py::dict d;
    py::dict kernels;
    for (const auto& k : result.kernels) {
      py::dict kd;
      kd["kernel"] = k.kernel_spec;
      kd["collisions"] = k.collisions;
      kd["failures"] = k.failures;
      kd["completed"] = k.completed;
      kd["min_distance"] = k.min_distance;
      kd["max_norm"] = k.max_norm;
      kernels[py::str(k.tag)] = kd;
    }
    d["kernels"] = kernels;
    d["files"] = result.files;
    return d;
  }, py::arg("config"), py::arg("outdir") = "");

  m.attr("SHIPPED_SEED") = lbm::kShippedSeed;
}
