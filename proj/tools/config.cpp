// Copyright 2026 The QEP Authors
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

#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>

namespace qep::cli {

using nlohmann::json;

namespace {

enum class Kind { Int, Seed, Number, OptInt, OptNumber, Choice, SitePair, NumberList, OptIntList, Labels };

struct Field {
  std::string key;
  Kind kind;
  json fallback;
  std::vector<std::string> choices;
  std::function<void(const json&)> check;
};

[[noreturn]] void reject(const std::string& key, const std::string& constraint) {
  throw ConfigError("invalid value for '" + key + "': " + constraint);
}

std::function<void(const json&)> at_least(std::string key, double min, std::string name = "") {
  if (name.empty()) name = key;
  return [key, min, name](const json& v) {
    if (!v.is_null() && !(v.get<double>() >= min)) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%g", min);
      reject(key, name + " >= " + buf);
    }
  };
}

std::function<void(const json&)> positive(std::string key, std::string name = "") {
  if (name.empty()) name = key;
  return [key, name](const json& v) {
    if (!v.is_null() && !(v.get<double>() > 0.0)) reject(key, name + " > 0");
  };
}

std::function<void(const json&)> in_range(std::string key, int min, int max) {
  return [key, min, max](const json& v) {
    const int x = v.get<int>();
    if (x < min) reject(key, key + " >= " + std::to_string(min));
    if (x > max) reject(key, key + " <= " + std::to_string(max));
  };
}

std::vector<Field> lanczos_fields() {
  return {
      {"seed", Kind::Seed, 0, {}, nullptr},
      {"lanczos_tol", Kind::Number, 1e-10, {}, positive("lanczos_tol")},
      {"lanczos_max_iter", Kind::Int, 1000, {}, at_least("lanczos_max_iter", 1)},
      {"degeneracy_tol", Kind::Number, 1e-8, {}, positive("degeneracy_tol")},
  };
}

const std::vector<std::string> kBoundaries{"periodic", "open"};
const std::vector<std::string> kSchemes{"symmetric", "one_sided"};
const std::vector<std::string> kCouplings{"full", "xz", "z"};

json default_labels() {
  return {{"cluster", {1, 1}}, {"ferromagnetic", {1, -1}}, {"paramagnetic", {-1, -1}}};
}

std::vector<Field> classifier_fields() {
  return {
      {"n", Kind::Int, 8, {}, in_range("n", 3, 16)},
      {"boundary", Kind::Choice, "periodic", kBoundaries, nullptr},
      {"attach_sites", Kind::SitePair, {3, 4}, {}, nullptr},
      {"couplings", Kind::Choice, "full", kCouplings, nullptr},
      {"label_chain_length", Kind::Int, 8, {}, in_range("label_chain_length", 4, 20)},
      {"scheme", Kind::Choice, "symmetric", kSchemes, nullptr},
      {"init_scale", Kind::Number, 0.1, {}, at_least("init_scale", 0.0)},
      {"batch_size", Kind::Int, 10, {}, at_least("batch_size", 1)},
  };
}

std::vector<Field> correlator_fields() {
  return {
      {"n", Kind::Int, 10, {}, in_range("n", 3, 20)},
      {"boundary", Kind::Choice, "periodic", kBoundaries, nullptr},
      {"g_zxz", Kind::Number, -0.5, {}, nullptr},
      {"observable_sites", Kind::SitePair, {0, 4}, {}, nullptr},
      {"beta", Kind::Number, 0.1, {}, positive("beta")},
      {"scheme", Kind::Choice, "symmetric", kSchemes, nullptr},
      {"learning_rate", Kind::Number, 0.1, {}, at_least("learning_rate", 0.0)},
      {"steps", Kind::Int, 100, {}, at_least("steps", 0)},
      {"shots", Kind::OptInt, nullptr, {}, at_least("shots", 1)},
  };
}

std::vector<Field> fields_for(std::string_view experiment) {
  std::vector<Field> f;
  if (experiment == "train-phase-classifier") {
    f = classifier_fields();
    const std::vector<Field> more{
        {"batches", Kind::Int, 300, {}, at_least("batches", 0)},
        {"shots", Kind::OptInt, 10, {}, at_least("shots", 1)},
        {"beta", Kind::Number, 0.4, {}, positive("beta")},
        {"learning_rate", Kind::Number, 0.01, {}, at_least("learning_rate", 0.0)},
        {"test_size", Kind::Int, 200, {}, at_least("test_size", 1)},
        {"eval_interval", Kind::Int, 10, {}, at_least("eval_interval", 1)},
        {"patience", Kind::Int, 10, {}, at_least("patience", 0)},
        {"restricted_radius", Kind::OptNumber, nullptr, {},
         [](const json& v) {
           if (!v.is_null() && !(v.get<double>() > 0.0 && v.get<double>() <= 1.0)) {
             reject("restricted_radius", "0 < restricted_radius <= 1");
           }
         }},
        {"single_shot_votes", Kind::Int, 1, {}, at_least("single_shot_votes", 1)},
        {"label_map", Kind::Labels, default_labels(), {}, nullptr},
        {"grid_resolution", Kind::Int, 20, {}, at_least("grid_resolution", 1)},
    };
    f.insert(f.end(), more.begin(), more.end());
  } else if (experiment == "explore-phase") {
    f = correlator_fields();
    f.push_back({"start_g_x", Kind::Number, -0.1, {}, nullptr});
    f.push_back({"start_g_zz", Kind::Number, 0.4, {}, nullptr});
  } else if (experiment == "optimize-sensitivity") {
    f = correlator_fields();
    f.push_back({"start_g_x_1", Kind::Number, -0.2, {}, nullptr});
    f.push_back({"start_g_x_2", Kind::Number, -1.5, {}, nullptr});
    f.push_back({"start_g_zz", Kind::Number, -1.5, {}, nullptr});
  } else if (experiment == "onsager-audit") {
    f = {
        {"n", Kind::Int, 4, {}, in_range("n", 3, 12)},
        {"instances", Kind::Int, 10, {}, at_least("instances", 1)},
        {"params_per_instance", Kind::Int, 8, {}, at_least("params_per_instance", 2)},
        {"pairs", Kind::Int, 5, {}, at_least("pairs", 1)},
        {"delta", Kind::Number, 1e-4, {}, positive("delta")},
        {"min_gap", Kind::Number, 0.2, {}, positive("min_gap")},
    };
  } else if (experiment == "nudge-sweep") {
    f = classifier_fields();
    const std::vector<Field> more{
        {"betas", Kind::NumberList, {0.05, 0.1, 0.2, 0.4, 0.8}, {},
         [](const json& v) {
           if (v.empty()) reject("betas", "at least one beta");
           for (const auto& b : v) {
             if (!(b.get<double>() > 0.0)) reject("betas", "beta > 0");
           }
         }},
        {"shots", Kind::OptIntList, {nullptr, 10}, {},
         [](const json& v) {
           if (v.empty()) reject("shots", "at least one shot count");
           for (const auto& m : v) {
             if (!m.is_null() && m.get<int>() < 1) reject("shots", "shots >= 1");
           }
         }},
        {"batches", Kind::Int, 30, {}, at_least("batches", 1)},
        {"warmup_batches", Kind::Int, 50, {}, at_least("warmup_batches", 0)},
    };
    f.insert(f.end(), more.begin(), more.end());
  } else {
    throw ConfigError("unknown experiment '" + std::string(experiment) + "'");
  }
  const auto common = lanczos_fields();
  f.insert(f.end(), common.begin(), common.end());
  return f;
}

bool is_int(const json& v) { return v.is_number_integer(); }

// Type check; real-valued keys are stored as doubles.
json coerce(const Field& f, const json& v) {
  auto type_error = [&](const char* expected) -> json {
    throw ConfigError("invalid value for '" + f.key + "': expected " + expected);
  };
  switch (f.kind) {
    case Kind::Int:
      if (!is_int(v)) return type_error("an integer");
      return v.get<long long>();
    case Kind::Seed:
      if (!is_int(v) || v.get<long long>() < 0) {
        if (!v.is_number_unsigned()) return type_error("a non-negative integer");
      }
      return v.get<std::uint64_t>();
    case Kind::Number:
      if (!v.is_number()) return type_error("a number");
      if (!std::isfinite(v.get<double>())) return type_error("a finite number");
      return v.get<double>();
    case Kind::OptInt:
      if (v.is_null()) return nullptr;
      if (!is_int(v)) return type_error("an integer or null");
      return v.get<long long>();
    case Kind::OptNumber:
      if (v.is_null()) return nullptr;
      if (!v.is_number()) return type_error("a number or null");
      return v.get<double>();
    case Kind::Choice: {
      if (!v.is_string()) return type_error("a string");
      const auto s = v.get<std::string>();
      if (std::find(f.choices.begin(), f.choices.end(), s) == f.choices.end()) {
        std::string list;
        for (const auto& c : f.choices) list += (list.empty() ? "" : ", ") + c;
        throw ConfigError("invalid value for '" + f.key + "': expected one of " + list);
      }
      return s;
    }
    case Kind::SitePair:
      if (!v.is_array() || v.size() != 2 || !is_int(v[0]) || !is_int(v[1])) {
        return type_error("two integer sites");
      }
      return json::array({v[0].get<int>(), v[1].get<int>()});
    case Kind::NumberList: {
      if (!v.is_array()) return type_error("an array of numbers");
      json out = json::array();
      for (const auto& x : v) {
        if (!x.is_number()) return type_error("an array of numbers");
        out.push_back(x.get<double>());
      }
      return out;
    }
    case Kind::OptIntList: {
      if (!v.is_array()) return type_error("an array of integers or nulls");
      json out = json::array();
      for (const auto& x : v) {
        if (!x.is_null() && !is_int(x)) return type_error("an array of integers or nulls");
        out.push_back(x.is_null() ? json(nullptr) : json(x.get<long long>()));
      }
      return out;
    }
    case Kind::Labels: {
      if (!v.is_object()) return type_error("an object of label combos");
      json out = json::object();
      for (const auto& [name, combo] : v.items()) {
        if (name != "cluster" && name != "ferromagnetic" && name != "paramagnetic") {
          throw ConfigError("unknown key 'label_map." + name + "'");
        }
        if (!combo.is_array() || combo.size() != 2 || !is_int(combo[0]) || !is_int(combo[1])) {
          return type_error("label combos of two integers");
        }
        out[name] = json::array({combo[0].get<int>(), combo[1].get<int>()});
      }
      for (const char* name : {"cluster", "ferromagnetic", "paramagnetic"}) {
        if (!out.contains(name)) {
          throw ConfigError("invalid value for 'label_map': missing '" + std::string(name) + "'");
        }
      }
      return out;
    }
  }
  return v;
}

void check_site_pair(const json& values, const char* key, int n) {
  const int a = values[key][0].get<int>();
  const int b = values[key][1].get<int>();
  if (a == b) reject(key, "sites must differ");
  if (a < 0 || b < 0 || a >= n || b >= n) reject(key, "0 <= site < n");
}

LabelMap labels_from(const json& j) {
  auto combo = [&](const char* name) {
    try {
      return OutcomeCombo(j[name][0].get<int>(), j[name][1].get<int>());
    } catch (const std::invalid_argument&) {
      reject("label_map", "combo entries must be +1 or -1");
    }
  };
  LabelMap m;
  m.combo = {combo("cluster"), combo("ferromagnetic"), combo("paramagnetic")};
  try {
    m.validate();
  } catch (const std::invalid_argument&) {
    reject("label_map", "combos must be distinct");
  }
  return m;
}

// Checks that involve several keys.
void cross_validate(const std::string& experiment, const json& v) {
  const int n = v["n"].get<int>();
  if (experiment == "train-phase-classifier" || experiment == "nudge-sweep") {
    check_site_pair(v, "attach_sites", n);
    if (experiment == "train-phase-classifier") labels_from(v["label_map"]);
  }
  if (experiment == "explore-phase" || experiment == "optimize-sensitivity") {
    check_site_pair(v, "observable_sites", n);
  }
  if (experiment == "optimize-sensitivity" &&
      std::abs(v["start_g_x_1"].get<double>() - v["start_g_x_2"].get<double>()) < 1e-6) {
    reject("start_g_x_2", "start_g_x_1 != start_g_x_2");
  }
}

LanczosOptions lanczos_from(const json& v) {
  LanczosOptions o;
  o.tol = v["lanczos_tol"].get<double>();
  o.max_iter = v["lanczos_max_iter"].get<int>();
  o.deg_tol = v["degeneracy_tol"].get<double>();
  o.seed = v["seed"].get<std::uint64_t>();
  return o;
}

std::array<int, 2> pair_from(const json& j) { return {j[0].get<int>(), j[1].get<int>()}; }

template <class T>
std::optional<T> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

CorrelatorSetup correlator_from(const json& v) {
  CorrelatorSetup s;
  s.chain_length = v["n"].get<int>();
  s.boundary = boundary_from_string(v["boundary"].get<std::string>());
  s.g_zxz = v["g_zxz"].get<double>();
  s.observable_sites = pair_from(v["observable_sites"]);
  s.beta = v["beta"].get<double>();
  s.scheme = nudge_kind_from_string(v["scheme"].get<std::string>());
  s.learning_rate = v["learning_rate"].get<double>();
  s.steps = v["steps"].get<int>();
  s.shots = optional_from<int>(v["shots"]);
  s.seed = v["seed"].get<std::uint64_t>();
  s.lanczos = lanczos_from(v);
  return s;
}

ClassifierSetup classifier_from(const json& v) {
  ClassifierSetup s;
  s.chain_length = v["n"].get<int>();
  s.boundary = boundary_from_string(v["boundary"].get<std::string>());
  s.attach_sites = pair_from(v["attach_sites"]);
  s.couplings = coupling_set_from_string(v["couplings"].get<std::string>());
  if (v.contains("label_map")) s.labels = labels_from(v["label_map"]);
  return s;
}

void expect_experiment(const RunConfig& c, std::string_view name) {
  if (c.experiment() != name) {
    throw ConfigError("config is for '" + c.experiment() + "', not '" + std::string(name) + "'");
  }
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"train-phase-classifier", "explore-phase",
                                              "optimize-sensitivity", "onsager-audit",
                                              "nudge-sweep"};
  return names;
}

std::uint64_t RunConfig::seed() const { return values_.at("seed").get<std::uint64_t>(); }

json default_config(std::string_view experiment) {
  json out = json::object();
  out["experiment"] = std::string(experiment);
  for (const auto& f : fields_for(experiment)) out[f.key] = coerce(f, f.fallback);
  return out;
}

RunConfig parse_config(const json& document) {
  if (!document.is_object()) throw ConfigError("config must be a JSON object");
  if (!document.contains("experiment") || !document["experiment"].is_string()) {
    throw ConfigError("missing key 'experiment'");
  }
  const auto experiment = document["experiment"].get<std::string>();
  const auto fields = fields_for(experiment);
  std::set<std::string> known{"experiment"};
  for (const auto& f : fields) known.insert(f.key);
  for (const auto& [key, value] : document.items()) {
    if (!known.count(key)) throw ConfigError("unknown key '" + key + "'");
  }
  json values = json::object();
  values["experiment"] = experiment;
  for (const auto& f : fields) {
    values[f.key] = coerce(f, document.contains(f.key) ? document[f.key] : f.fallback);
    if (f.check) f.check(values[f.key]);
  }
  cross_validate(experiment, values);
  return RunConfig(experiment, std::move(values));
}

json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed config file '" + path.string() + "': " + e.what());
  }
}

void apply_overrides(json& document, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + a + "' is not of the form key=value");
    }
    const std::string key = a.substr(0, eq);
    const std::string text = a.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    document[key] = std::move(value);
  }
}

SupervisedConfig supervised_config(const RunConfig& c) {
  expect_experiment(c, "train-phase-classifier");
  const auto& v = c.values();
  SupervisedConfig s;
  s.setup = classifier_from(v);
  s.label_chain_length = v["label_chain_length"].get<int>();
  s.batch_size = v["batch_size"].get<int>();
  s.batches = v["batches"].get<int>();
  s.shots = optional_from<int>(v["shots"]);
  s.beta = v["beta"].get<double>();
  s.scheme = nudge_kind_from_string(v["scheme"].get<std::string>());
  s.learning_rate = v["learning_rate"].get<double>();
  s.init_scale = v["init_scale"].get<double>();
  s.test_size = v["test_size"].get<int>();
  s.eval_interval = v["eval_interval"].get<int>();
  s.patience = v["patience"].get<int>();
  s.restricted_radius = optional_from<double>(v["restricted_radius"]);
  s.single_shot_votes = v["single_shot_votes"].get<int>();
  s.seed = c.seed();
  s.lanczos = lanczos_from(v);
  return s;
}

ExploreConfig explore_config(const RunConfig& c) {
  expect_experiment(c, "explore-phase");
  ExploreConfig e;
  e.setup = correlator_from(c.values());
  e.g_x = c.values()["start_g_x"].get<double>();
  e.g_zz = c.values()["start_g_zz"].get<double>();
  return e;
}

SensitivityConfig sensitivity_config(const RunConfig& c) {
  expect_experiment(c, "optimize-sensitivity");
  const auto& v = c.values();
  SensitivityConfig s;
  s.setup = correlator_from(v);
  s.start = {v["start_g_x_1"].get<double>(), v["start_g_x_2"].get<double>(),
             v["start_g_zz"].get<double>()};
  return s;
}

NudgeSweepConfig sweep_config(const RunConfig& c) {
  expect_experiment(c, "nudge-sweep");
  const auto& v = c.values();
  NudgeSweepConfig s;
  s.setup = classifier_from(v);
  s.label_chain_length = v["label_chain_length"].get<int>();
  s.betas = v["betas"].get<std::vector<double>>();
  s.shots.clear();
  for (const auto& m : v["shots"]) s.shots.push_back(optional_from<int>(m));
  s.batches = v["batches"].get<int>();
  s.batch_size = v["batch_size"].get<int>();
  s.scheme = nudge_kind_from_string(v["scheme"].get<std::string>());
  s.init_scale = v["init_scale"].get<double>();
  s.warmup_batches = v["warmup_batches"].get<int>();
  s.seed = c.seed();
  s.lanczos = lanczos_from(v);
  return s;
}

AuditConfig audit_config(const RunConfig& c) {
  expect_experiment(c, "onsager-audit");
  const auto& v = c.values();
  AuditConfig a;
  a.n_sites = v["n"].get<int>();
  a.instances = v["instances"].get<int>();
  a.params_per_instance = v["params_per_instance"].get<int>();
  a.pairs = v["pairs"].get<int>();
  a.delta = v["delta"].get<double>();
  a.min_gap = v["min_gap"].get<double>();
  a.seed = c.seed();
  a.lanczos = lanczos_from(v);
  return a;
}

}  // namespace qep::cli
