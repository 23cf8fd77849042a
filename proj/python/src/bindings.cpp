// Copyright 2026 The ladri Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ladri/dataset.hpp"
#include "ladri/error.hpp"
#include "ladri/evaluation.hpp"
#include "ladri/features.hpp"
#include "ladri/hara.hpp"
#include "ladri/json_io.hpp"
#include "ladri/labeling.hpp"
#include "ladri/network.hpp"
#include "ladri/scenario.hpp"
#include "ladri/scenarios.hpp"

namespace py = pybind11;
using namespace ladri;

namespace
{

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Labels = py::array_t<int, py::array::c_style | py::array::forcecast>;

Json parse(const std::string & text)
{
  try {
    return Json::parse(text);
  } catch (const Json::exception & e) {
    throw ConfigError("<input>", std::string("invalid JSON: ") + e.what());
  }
}

Matrix to_matrix(const Array & a)
{
  if (a.ndim() != 2) throw Error(ErrorKind::InvalidInput, "expected a 2-D array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

Array from_matrix(const Matrix & m)
{
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

LabeledSet labeled(const Array & x, const Labels & y)
{
  LabeledSet s;
  s.x = to_matrix(x);
  s.y.assign(y.data(), y.data() + y.size());
  if (s.y.size() != s.x.rows()) throw Error(ErrorKind::Data, "features and labels differ in length");
  return s;
}

py::dict simulate(const std::string & config_json)
{
  const auto config = scenario_from_json(parse(config_json));
  const auto trace = run_scenario(config);
  const auto front = label_trace(trace, Perspective::EgoFront, config.hara);

  const std::size_t n = trace.records.size();
  const std::size_t vehicles = trace.records.front().vehicles.size();
  py::array_t<double> time(n);
  py::array_t<double> position({n, vehicles});
  py::array_t<double> speed({n, vehicles});
  py::array_t<double> effective({n, vehicles});
  py::array_t<int> stage(n);
  auto t = time.mutable_unchecked<1>();
  auto x = position.mutable_unchecked<2>();
  auto v = speed.mutable_unchecked<2>();
  auto a = effective.mutable_unchecked<2>();
  auto s = stage.mutable_unchecked<1>();
  for (std::size_t i = 0; i < n; ++i) {
    const auto & r = trace.records[i];
    t(i) = r.time;
    for (std::size_t k = 0; k < vehicles; ++k) {
      x(i, k) = r.vehicles[k].position;
      v(i, k) = r.vehicles[k].speed;
      a(i, k) = r.effective[k];
    }
    s(i) = static_cast<int>(front.labels[i].stage);
  }

  py::dict out;
  out["time"] = time;
  out["position"] = position;
  out["speed"] = speed;
  out["effective_accel"] = effective;
  out["stage"] = stage;
  out["time_to_stage"] = std::vector<std::optional<double>>(front.time_to_stage.begin(), front.time_to_stage.end());
  out["collision_time"] = trace.collision ? py::cast(trace.collision->time) : py::none();
  if (trace.behind_ego) {
    const auto rear = label_trace(trace, Perspective::EgoRear, config.hara);
    py::array_t<int> rear_stage(n);
    auto r = rear_stage.mutable_unchecked<1>();
    for (std::size_t i = 0; i < n; ++i) r(i) = static_cast<int>(rear.labels[i].stage);
    out["rear_stage"] = rear_stage;
    out["rear_time_to_stage"] =
      std::vector<std::optional<double>>(rear.time_to_stage.begin(), rear.time_to_stage.end());
  }
  return out;
}

py::dict generate(const std::string & sweep_json)
{
  const auto data = generate_dataset(sweep_from_json(parse(sweep_json)));
  const auto set = to_labeled_set(data.rows);
  py::array_t<std::uint64_t> ids(data.rows.size());
  auto id = ids.mutable_unchecked<1>();
  for (std::size_t i = 0; i < data.rows.size(); ++i) id(i) = data.rows[i].scenario_id;
  py::dict out;
  out["features"] = from_matrix(set.x);
  out["stage"] = py::array_t<int>(set.y.size(), set.y.data());
  out["scenario_id"] = ids;
  out["class_counts"] = std::vector<std::size_t>(data.meta.class_counts.begin(), data.meta.class_counts.end());
  return out;
}

py::dict metrics_dict(const Metrics & m)
{
  py::dict d;
  d["accuracy"] = m.accuracy;
  d["macro_f1"] = m.macro_f1;
  d["confusion"] = m.confusion;
  d["mean_inference_latency"] = m.mean_inference_latency;
  std::vector<double> f1;
  for (const auto & c : m.per_class) f1.push_back(c.f1);
  d["f1"] = f1;
  return d;
}

class PyModel
{
public:
  explicit PyModel(ModelWeights w) : weights_(std::move(w)) {}

  static PyModel load(const std::string & path) { return PyModel(load_model(path).weights); }
  static PyModel zeros() { return PyModel(ModelWeights::zeros(NetworkSpec{})); }

  void save(const std::string & path) const { save_model(ModelFile{weights_, std::nullopt}, path); }

  Array predict_proba(const Array & x) const
  {
    const auto m = to_matrix(x);
    Predictor p(weights_);
    Matrix out(m.rows(), weights_.spec.output_dim);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const auto probs = p.probabilities(m.row(i));
      std::copy(probs.begin(), probs.end(), out.row(i).begin());
    }
    return from_matrix(out);
  }

  py::array_t<int> predict(const Array & x) const
  {
    const auto m = to_matrix(x);
    Predictor p(weights_);
    py::array_t<int> out(m.rows());
    auto o = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < m.rows(); ++i) o(i) = p.predict(m.row(i));
    return out;
  }

  py::dict evaluate(const Array & x, const Labels & y) const
  {
    return metrics_dict(evaluate_model(weights_, labeled(x, y)));
  }

  std::size_t parameter_count() const { return weights_.parameter_count(); }
  std::vector<std::size_t> hidden() const { return weights_.spec.hidden; }

private:
  ModelWeights weights_;
};

std::pair<PyModel, std::vector<double>> train_model(
  const Array & x, const Labels & y, const Array & val_x, const Labels & val_y,
  const std::string & spec_json, bool baseline)
{
  const auto spec = training_spec_from_json(parse(spec_json));
  const auto r = baseline ? train_baseline(spec.train, labeled(x, y), labeled(val_x, val_y))
                          : train(spec.network, spec.train, labeled(x, y), labeled(val_x, val_y));
  std::vector<double> losses;
  for (const auto & e : r.history) losses.push_back(e.val_loss);
  return {PyModel(r.weights), losses};
}

py::tuple run_cli(const std::vector<std::string> & args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_ladri, m)
{
  m.doc() = "Longitudinal risk simulator, HARA labeling oracle and learned risk indicator";

  static py::exception<Error> base(m, "LadriError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error & e) {
      const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
      PyErr_SetString(base.ptr(), msg.c_str());
    }
  });

  m.attr("FEATURE_NAMES") = std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end());

  m.def("compute_ttc", &compute_ttc, py::arg("gap"), py::arg("closing_speed"));
  m.def("compute_headway", &compute_headway, py::arg("gap"), py::arg("ego_speed"));
  m.def("compute_required_decel", &compute_required_decel, py::arg("gap"), py::arg("closing_speed"));
  m.def(
    "classify",
    [](double closing, double required_decel, double ttc) {
      const auto l = classify(closing, required_decel, ttc);
      return py::make_tuple(
        static_cast<int>(l.severity), static_cast<int>(l.controllability), static_cast<int>(l.stage));
    },
    py::arg("closing_speed"), py::arg("required_decel"), py::arg("ttc"),
    "(severity, controllability, stage) as integers");

  m.def(
    "scenario_config",
    [](const std::string & name, double magnitude) {
      if (name == "unintended_accel") return to_json(unintended_accel_scenario(magnitude)).dump();
      if (name == "unintended_brake") return to_json(unintended_brake_scenario(magnitude)).dump();
      if (name == "equilibrium") return to_json(equilibrium_scenario()).dump();
      throw ConfigError("name", "unknown scenario '" + name + "'");
    },
    py::arg("name"), py::arg("magnitude") = 0.5, "Built-in scenario as a JSON string");
  m.def("simulate", &simulate, py::arg("config_json"));
  m.def("generate_dataset", &generate, py::arg("sweep_json") = "{}");

  py::class_<PyModel>(m, "Model")
    .def_static("load", &PyModel::load, py::arg("path"))
    .def_static("zeros", &PyModel::zeros)
    .def("save", &PyModel::save, py::arg("path"))
    .def("predict_proba", &PyModel::predict_proba, py::arg("features"))
    .def("predict", &PyModel::predict, py::arg("features"))
    .def("evaluate", &PyModel::evaluate, py::arg("features"), py::arg("labels"))
    .def_property_readonly("parameter_count", &PyModel::parameter_count)
    .def_property_readonly("hidden", &PyModel::hidden);

  m.def(
    "train", &train_model, py::arg("features"), py::arg("labels"), py::arg("val_features"),
    py::arg("val_labels"), py::arg("spec_json") = "{}", py::arg("baseline") = false,
    "Returns (model, validation loss per epoch)");
  m.def("run_cli", &run_cli, py::arg("args"), "Returns (exit_code, stdout, stderr)");
}
