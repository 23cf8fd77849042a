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

#include "ladri/json_io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "ladri/error.hpp"
#include "ladri/features.hpp"
#include "ladri/text.hpp"

namespace ladri
{

namespace
{

/// Typed view of one JSON object that remembers which keys were consumed.
class Fields
{
public:
  Fields(const Json & j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
  }

  std::string at(std::string_view key) const
  {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const Json * find(std::string_view key)
  {
    seen_.emplace(key);
    const auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  const Json & require(std::string_view key)
  {
    const Json * v = find(key);
    if (!v) throw ConfigError(at(key), "is required");
    return *v;
  }

  double number(std::string_view key, double def)
  {
    const Json * v = find(key);
    if (!v) return def;
    if (!v->is_number()) throw ConfigError(at(key), "must be a number");
    return v->get<double>();
  }

  std::uint64_t u64(std::string_view key, std::uint64_t def)
  {
    const Json * v = find(key);
    if (!v) return def;
    if (!v->is_number_unsigned()) throw ConfigError(at(key), "must be a non-negative integer");
    return v->get<std::uint64_t>();
  }

  bool boolean(std::string_view key, bool def)
  {
    const Json * v = find(key);
    if (!v) return def;
    if (!v->is_boolean()) throw ConfigError(at(key), "must be a boolean");
    return v->get<bool>();
  }

  std::string text(std::string_view key, const std::string & def)
  {
    const Json * v = find(key);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(at(key), "must be a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(std::string_view key, const std::vector<double> & def)
  {
    const Json * v = find(key);
    if (!v) return def;
    if (!v->is_array()) throw ConfigError(at(key), "must be an array of numbers");
    std::vector<double> out;
    for (const auto & e : *v) {
      if (!e.is_number()) throw ConfigError(at(key), "must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish() const
  {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
    }
  }

private:
  const Json & j_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

// Re-roots a ConfigError raised for a nested object.
ConfigError nested(const ConfigError & e, const std::string & prefix)
{
  const std::string what = e.what();
  return ConfigError(prefix + "." + e.field(), what.substr(std::min(what.size(), e.field().size() + 2)));
}

template <std::size_t N>
std::array<double, N> fixed_numbers(Fields & f, std::string_view key, const std::array<double, N> & def)
{
  const auto v = f.numbers(key, std::vector<double>(def.begin(), def.end()));
  if (v.size() != N) throw ConfigError(f.at(key), "must have " + std::to_string(N) + " entries");
  std::array<double, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

Role role_from(const std::string & s, const std::string & path)
{
  if (s == "Ego") return Role::Ego;
  if (s == "Lead") return Role::Lead;
  if (s == "Follower") return Role::Follower;
  throw ConfigError(path, "unknown role '" + s + "'");
}

PolicyKind policy_from(const std::string & s, const std::string & path)
{
  if (s == "ConstantSpeed") return PolicyKind::ConstantSpeed;
  if (s == "Scripted") return PolicyKind::Scripted;
  if (s == "Acc") return PolicyKind::Acc;
  throw ConfigError(path, "unknown policy '" + s + "'");
}

FaultKind fault_kind_from(const std::string & s, const std::string & path)
{
  if (s == "UnintendedAccel") return FaultKind::UnintendedAccel;
  if (s == "UnintendedBrake") return FaultKind::UnintendedBrake;
  throw ConfigError(path, "unknown fault kind '" + s + "'");
}

AccParams acc_from(const Json & j, const std::string & path, const AccParams & def)
{
  Fields f(j, path);
  AccParams p;
  p.v_set = f.number("v_set", def.v_set);
  p.gap_des_time = f.number("gap_des_time", def.gap_des_time);
  p.gap_min = f.number("gap_min", def.gap_min);
  p.k_gap = f.number("k_gap", def.k_gap);
  p.k_speed = f.number("k_speed", def.k_speed);
  p.detection_range = f.number("detection_range", def.detection_range);
  p.reaction_time = f.number("reaction_time", def.reaction_time);
  f.finish();
  return p;
}

Json acc_to_json(const AccParams & p)
{
  return {
    {"v_set", p.v_set},
    {"gap_des_time", p.gap_des_time},
    {"gap_min", p.gap_min},
    {"k_gap", p.k_gap},
    {"k_speed", p.k_speed},
    {"detection_range", p.detection_range},
    {"reaction_time", p.reaction_time},
  };
}

NoiseSpec noise_from(const Json & j, const std::string & path)
{
  Fields f(j, path);
  const NoiseSpec def;
  NoiseSpec n;
  n.sigma_range = f.number("sigma_range", def.sigma_range);
  n.sigma_range_rate = f.number("sigma_range_rate", def.sigma_range_rate);
  n.sigma_wheel = f.number("sigma_wheel", def.sigma_wheel);
  n.sigma_pedal = f.number("sigma_pedal", def.sigma_pedal);
  n.dropout_prob = f.number("dropout_prob", def.dropout_prob);
  f.finish();
  return n;
}

HaraThresholds hara_from(const Json & j, const std::string & path)
{
  Fields f(j, path);
  const HaraThresholds def;
  HaraThresholds t;
  t.severity_dv = fixed_numbers<3>(f, "severity_dv", def.severity_dv);
  t.controllability_decel = fixed_numbers<3>(f, "controllability_decel", def.controllability_decel);
  t.ttc_force_c3 = f.number("ttc_force_c3", def.ttc_force_c3);
  t.ttc_raise = f.number("ttc_raise", def.ttc_raise);
  if (const Json * table = f.find("stage_table")) {
    const std::string at = f.at("stage_table");
    if (!table->is_array() || table->size() != 4) throw ConfigError(at, "must be 4 rows of 4 integers");
    for (std::size_t c = 0; c < 4; ++c) {
      const auto & row = (*table)[c];
      if (!row.is_array() || row.size() != 4) throw ConfigError(at, "must be 4 rows of 4 integers");
      for (std::size_t s = 0; s < 4; ++s) {
        if (!row[s].is_number_integer()) throw ConfigError(at, "must be 4 rows of 4 integers");
        t.stage_table[c][s] = row[s].get<int>();
      }
    }
  }
  f.finish();
  return t;
}

std::string exact(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double exact_from(const Json & j, const char * what)
{
  if (!j.is_string()) throw Error(ErrorKind::Model, std::string(what) + ": expected decimal string");
  const auto v = parse_double(j.get<std::string>());
  if (!v || !std::isfinite(*v)) {
    throw Error(ErrorKind::Model, std::string(what) + ": bad number '" + j.get<std::string>() + "'");
  }
  return *v;
}

Json exact_array(const std::vector<double> & values)
{
  Json out = Json::array();
  for (const double v : values) out.push_back(exact(v));
  return out;
}

std::vector<double> exact_array_from(const Json & j, const char * what)
{
  if (!j.is_array()) throw Error(ErrorKind::Model, std::string(what) + ": expected array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto & e : j) out.push_back(exact_from(e, what));
  return out;
}

NetworkSpec network_from(const Json & j, const std::string & path)
{
  Fields f(j, path);
  NetworkSpec spec;
  spec.input_dim = f.u64("input_dim", spec.input_dim);
  spec.output_dim = f.u64("output_dim", spec.output_dim);
  if (const Json * hidden = f.find("hidden")) {
    if (!hidden->is_array()) throw ConfigError(f.at("hidden"), "must be an array of widths");
    spec.hidden.clear();
    for (const auto & w : *hidden) {
      if (!w.is_number_unsigned() || w.get<std::uint64_t>() == 0) {
        throw ConfigError(f.at("hidden"), "widths must be integers >= 1");
      }
      spec.hidden.push_back(w.get<std::size_t>());
    }
  }
  f.finish();
  if (spec.input_dim == 0) throw ConfigError(f.at("input_dim"), "must be >= 1");
  if (spec.output_dim == 0) throw ConfigError(f.at("output_dim"), "must be >= 1");
  return spec;
}

Json network_to_json(const NetworkSpec & spec)
{
  return {{"input_dim", spec.input_dim}, {"hidden", spec.hidden}, {"output_dim", spec.output_dim}};
}

TrainConfig train_from(const Json & j, const std::string & path)
{
  Fields f(j, path);
  const TrainConfig def;
  TrainConfig c;
  c.learning_rate = f.number("learning_rate", def.learning_rate);
  c.batch_size = f.u64("batch_size", def.batch_size);
  c.epochs = f.u64("epochs", def.epochs);
  c.beta1 = f.number("beta1", def.beta1);
  c.beta2 = f.number("beta2", def.beta2);
  c.epsilon = f.number("epsilon", def.epsilon);
  c.seed = f.u64("seed", def.seed);
  if (const Json * s = f.find("shuffle_seed"); s && !s->is_null()) {
    if (!s->is_number_unsigned()) throw ConfigError(f.at("shuffle_seed"), "must be an integer");
    c.shuffle_seed = s->get<std::uint64_t>();
  }
  c.l2 = f.number("l2", def.l2);
  c.class_weighting = f.boolean("class_weighting", def.class_weighting);
  f.finish();
  try {
    c.validate();
  } catch (const ConfigError & e) {
    throw nested(e, path);
  }
  return c;
}

Json train_to_json(const TrainConfig & c)
{
  Json j = {
    {"learning_rate", c.learning_rate},
    {"batch_size", c.batch_size},
    {"epochs", c.epochs},
    {"beta1", c.beta1},
    {"beta2", c.beta2},
    {"epsilon", c.epsilon},
    {"seed", c.seed},
    {"l2", c.l2},
    {"class_weighting", c.class_weighting},
  };
  if (c.shuffle_seed) j["shuffle_seed"] = *c.shuffle_seed;
  return j;
}

}  // namespace

Json load_json_file(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::exception & e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

ScenarioConfig scenario_from_json(const Json & j)
{
  Fields f(j, "");
  ScenarioConfig c;
  c.dt = f.number("dt", c.dt);
  c.duration = f.number("duration", c.duration);
  c.seed = f.u64("seed", c.seed);
  if (const Json * v = f.find("acc_params")) c.acc_params = acc_from(*v, "acc_params", AccParams{});
  if (const Json * v = f.find("limits")) {
    Fields lf(*v, "limits");
    c.limits.a_min = lf.number("a_min", c.limits.a_min);
    c.limits.a_max = lf.number("a_max", c.limits.a_max);
    lf.finish();
  }
  if (const Json * v = f.find("noise")) c.noise = noise_from(*v, "noise");
  if (const Json * v = f.find("hara")) c.hara = hara_from(*v, "hara");
  if (const Json * v = f.find("fault"); v && !v->is_null()) {
    Fields ff(*v, "fault");
    FaultSpec fault;
    fault.kind = fault_kind_from(ff.text("kind", "UnintendedAccel"), "fault.kind");
    fault.magnitude = ff.number("magnitude", fault.magnitude);
    fault.t_start = ff.number("t_start", fault.t_start);
    fault.t_end = ff.number("t_end", c.duration);
    ff.finish();
    c.fault = fault;
  }

  const Json & vehicles = f.require("vehicles");
  if (!vehicles.is_array()) throw ConfigError("vehicles", "must be an array");
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const std::string path = "vehicles[" + std::to_string(i) + "]";
    Fields vf(vehicles[i], path);
    VehicleConfig v;
    v.initial.role = role_from(vf.text("role", "Ego"), path + ".role");
    v.initial.position = vf.number("position", 0.0);
    v.initial.speed = vf.number("speed", 0.0);
    v.policy = policy_from(vf.text("policy", "Acc"), path + ".policy");
    if (const Json * acc = vf.find("acc_params")) {
      v.acc = acc_from(*acc, path + ".acc_params", c.acc_params);
    }
    if (const Json * profile = vf.find("profile")) {
      if (!profile->is_array()) throw ConfigError(path + ".profile", "must be an array");
      for (std::size_t k = 0; k < profile->size(); ++k) {
        Fields pf((*profile)[k], path + ".profile[" + std::to_string(k) + "]");
        ProfilePoint point;
        point.time = pf.number("time", 0.0);
        point.accel = pf.number("accel", 0.0);
        pf.finish();
        v.profile.push_back(point);
      }
    }
    vf.finish();
    c.vehicles.push_back(v);
  }
  f.finish();
  c.validate();
  return c;
}

Json to_json(const ScenarioConfig & c)
{
  Json vehicles = Json::array();
  for (const auto & v : c.vehicles) {
    Json jv = {
      {"role", std::string(to_string(v.initial.role))},
      {"position", v.initial.position},
      {"speed", v.initial.speed},
      {"policy", std::string(to_string(v.policy))},
    };
    if (v.acc) jv["acc_params"] = acc_to_json(*v.acc);
    if (!v.profile.empty()) {
      Json profile = Json::array();
      for (const auto & p : v.profile) profile.push_back({{"time", p.time}, {"accel", p.accel}});
      jv["profile"] = profile;
    }
    vehicles.push_back(jv);
  }
  Json table = Json::array();
  for (const auto & row : c.hara.stage_table) table.push_back(row);
  Json j = {
    {"dt", c.dt},
    {"duration", c.duration},
    {"seed", c.seed},
    {"vehicles", vehicles},
    {"acc_params", acc_to_json(c.acc_params)},
    {"limits", {{"a_min", c.limits.a_min}, {"a_max", c.limits.a_max}}},
    {"noise",
     {{"sigma_range", c.noise.sigma_range},
      {"sigma_range_rate", c.noise.sigma_range_rate},
      {"sigma_wheel", c.noise.sigma_wheel},
      {"sigma_pedal", c.noise.sigma_pedal},
      {"dropout_prob", c.noise.dropout_prob}}},
    {"hara",
     {{"severity_dv", c.hara.severity_dv},
      {"controllability_decel", c.hara.controllability_decel},
      {"ttc_force_c3", c.hara.ttc_force_c3},
      {"ttc_raise", c.hara.ttc_raise},
      {"stage_table", table}}},
  };
  if (c.fault) {
    j["fault"] = {
      {"kind", std::string(to_string(c.fault->kind))},
      {"magnitude", c.fault->magnitude},
      {"t_start", c.fault->t_start},
      {"t_end", c.fault->t_end},
    };
  } else {
    j["fault"] = nullptr;
  }
  return j;
}

SweepConfig sweep_from_json(const Json & j)
{
  Fields f(j, "");
  SweepConfig s = default_sweep();
  if (const Json * base = f.find("base")) {
    try {
      s.base = scenario_from_json(*base);
    } catch (const ConfigError & e) {
      throw nested(e, "base");
    }
  }
  if (const Json * kinds = f.find("fault_kinds")) {
    if (!kinds->is_array()) throw ConfigError("fault_kinds", "must be an array");
    s.fault_kinds.clear();
    for (const auto & k : *kinds) {
      if (!k.is_string()) throw ConfigError("fault_kinds", "entries must be strings");
      s.fault_kinds.push_back(fault_kind_from(k.get<std::string>(), "fault_kinds"));
    }
  }
  s.magnitudes = f.numbers("magnitudes", s.magnitudes);
  s.include_fault_free = f.boolean("include_fault_free", s.include_fault_free);
  s.initial_gaps = f.numbers("initial_gaps", s.initial_gaps);
  s.lead_speeds = f.numbers("lead_speeds", s.lead_speeds);
  s.ego_speeds = f.numbers("ego_speeds", s.ego_speeds);
  s.fault_t_start = f.number("fault_t_start", s.fault_t_start);
  s.sample_period = f.number("sample_period", s.sample_period);
  s.noise = f.boolean("noise", s.noise);
  s.master_seed = f.u64("master_seed", s.master_seed);
  f.finish();
  s.validate();
  return s;
}

Json to_json(const SweepConfig & s)
{
  Json kinds = Json::array();
  for (const auto k : s.fault_kinds) kinds.push_back(std::string(to_string(k)));
  return {
    {"base", to_json(s.base)},
    {"fault_kinds", kinds},
    {"magnitudes", s.magnitudes},
    {"include_fault_free", s.include_fault_free},
    {"initial_gaps", s.initial_gaps},
    {"lead_speeds", s.lead_speeds},
    {"ego_speeds", s.ego_speeds},
    {"fault_t_start", s.fault_t_start},
    {"sample_period", s.sample_period},
    {"noise", s.noise},
    {"master_seed", s.master_seed},
  };
}

TrainingSpec training_spec_from_json(const Json & j)
{
  Fields f(j, "");
  TrainingSpec spec;
  if (const Json * v = f.find("network")) spec.network = network_from(*v, "network");
  if (const Json * v = f.find("train")) spec.train = train_from(*v, "train");
  if (const Json * v = f.find("split")) {
    Fields sf(*v, "split");
    spec.split_fractions = fixed_numbers<3>(sf, "fractions", spec.split_fractions);
    spec.split_seed = sf.u64("seed", spec.split_seed);
    sf.finish();
  }
  f.finish();
  return spec;
}

Json to_json(const TrainingSpec & spec)
{
  return {
    {"network", network_to_json(spec.network)},
    {"train", train_to_json(spec.train)},
    {"split", {{"fractions", spec.split_fractions}, {"seed", spec.split_seed}}},
  };
}

Json model_to_json(const ModelFile & model)
{
  const auto & w = model.weights;
  Json names = Json::array();
  for (const auto name : kFeatureNames) names.push_back(std::string(name));
  Json layers = Json::array();
  for (const auto & layer : w.layers) {
    layers.push_back({
      {"rows", layer.weights.rows()},
      {"cols", layer.weights.cols()},
      {"weights", exact_array(layer.weights.data())},
      {"bias", exact_array(layer.bias)},
    });
  }
  Json j = {
    {"format_version", w.format_version},
    {"feature_contract_version", kFeatureContractVersion},
    {"feature_names", names},
    {"spec", network_to_json(w.spec)},
    {"norm_stats",
     {{"mean", exact_array(w.norm_stats.mean)}, {"stddev", exact_array(w.norm_stats.stddev)}}},
    {"layers", layers},
  };
  if (model.training) j["training"] = to_json(*model.training);
  return j;
}

ModelFile model_from_json(const Json & j)
{
  if (!j.is_object()) throw Error(ErrorKind::Model, "model must be a JSON object");
  const auto version = j.value("format_version", -1);
  if (version != ModelWeights::kFormatVersion) {
    throw Error(
      ErrorKind::Version, "model format_version " + std::to_string(version) + ", expected " +
                            std::to_string(ModelWeights::kFormatVersion));
  }
  if (j.value("feature_contract_version", -1) != kFeatureContractVersion) {
    throw Error(ErrorKind::Version, "feature contract version mismatch");
  }
  const auto names = j.find("feature_names");
  bool names_ok = names != j.end() && names->is_array() && names->size() == kFeatureNames.size();
  for (std::size_t k = 0; names_ok && k < kFeatureNames.size(); ++k) {
    names_ok = (*names)[k].is_string() && (*names)[k].get<std::string>() == kFeatureNames[k];
  }
  if (!names_ok) throw Error(ErrorKind::Version, "feature names or order differ from this build");

  ModelFile model;
  auto & w = model.weights;
  try {
    w.spec = network_from(j.at("spec"), "spec");
    const auto & norm = j.at("norm_stats");
    w.norm_stats.mean = exact_array_from(norm.at("mean"), "norm_stats.mean");
    w.norm_stats.stddev = exact_array_from(norm.at("stddev"), "norm_stats.stddev");
    for (const auto & jl : j.at("layers")) {
      DenseLayer layer;
      const auto rows = jl.at("rows").get<std::size_t>();
      const auto cols = jl.at("cols").get<std::size_t>();
      layer.weights = Matrix(rows, cols);
      const auto values = exact_array_from(jl.at("weights"), "layers.weights");
      if (values.size() != rows * cols) throw Error(ErrorKind::Model, "layer weight count mismatch");
      layer.weights.data() = values;
      layer.bias = exact_array_from(jl.at("bias"), "layers.bias");
      w.layers.push_back(std::move(layer));
    }
    if (const auto t = j.find("training"); t != j.end()) {
      model.training = training_spec_from_json(*t);
    }
  } catch (const Json::exception & e) {
    throw Error(ErrorKind::Model, std::string("malformed model: ") + e.what());
  } catch (const ConfigError & e) {
    throw Error(ErrorKind::Model, std::string("malformed model: ") + e.what());
  }
  w.validate();
  return model;
}

void save_model(const ModelFile & model, const std::filesystem::path & path)
{
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Model, "cannot open " + path.string() + " for writing");
  out << model_to_json(model).dump(1) << '\n';
  if (!out) throw Error(ErrorKind::Model, "failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Model, "cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception & e) {
    throw Error(ErrorKind::Model, std::string("invalid model JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace ladri
