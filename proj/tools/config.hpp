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

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qep/qep.hpp"
#include "qep/supervised.hpp"
#include "qep/sweep.hpp"
#include "qep/unsupervised.hpp"

namespace qep::cli {

/// Invalid configuration; the message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Experiment names accepted on the command line.
const std::vector<std::string>& experiment_names();

/// A validated configuration with every default materialized.
class RunConfig {
 public:
  const std::string& experiment() const { return experiment_; }
  /// Flat JSON object including the "experiment" key.
  const nlohmann::json& values() const { return values_; }
  std::uint64_t seed() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

 private:
  friend RunConfig parse_config(const nlohmann::json& document);
  RunConfig(std::string experiment, nlohmann::json values)
      : experiment_(std::move(experiment)), values_(std::move(values)) {}

  std::string experiment_;
  nlohmann::json values_;
};

/// Full default document for \p experiment.
nlohmann::json default_config(std::string_view experiment);

/// Merges \p document over the defaults of its "experiment" and validates.
/// Throws ConfigError on a missing or unknown experiment, an unknown key,
/// a value of the wrong type or an out-of-range value.
RunConfig parse_config(const nlohmann::json& document);

/// Reads a JSON file; throws ConfigError if it is missing or malformed.
nlohmann::json read_config_file(const std::filesystem::path& path);

/// Applies "key=value" overrides.  The value is read as JSON when it parses,
/// else as a string.
void apply_overrides(nlohmann::json& document, const std::vector<std::string>& assignments);

SupervisedConfig supervised_config(const RunConfig& c);
ExploreConfig explore_config(const RunConfig& c);
SensitivityConfig sensitivity_config(const RunConfig& c);
NudgeSweepConfig sweep_config(const RunConfig& c);

struct AuditConfig {
  int n_sites = 4;
  int instances = 10;
  int params_per_instance = 8;
  int pairs = 5;
  double delta = 1e-4;
  /// Random draws with a smaller spectral gap are discarded.
  double min_gap = 0.2;
  std::uint64_t seed = 0;
  LanczosOptions lanczos;
};
AuditConfig audit_config(const RunConfig& c);

}  // namespace qep::cli
