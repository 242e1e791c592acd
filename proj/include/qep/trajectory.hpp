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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qep {

struct TrajectoryRecord {
  int step = 0;
  std::optional<double> loss;
  std::optional<double> grad_norm;
  std::vector<double> params;
  std::vector<double> outputs;
  std::optional<double> many_queries_accuracy;
  std::optional<double> single_shot_accuracy;
  int failed_samples = 0;
};

struct Trajectory {
  std::string experiment;
  std::vector<std::string> param_labels;
  std::vector<std::string> output_labels;
  bool records_accuracy = false;
  std::vector<TrajectoryRecord> records;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::uint64_t equilibrations = 0;
  bool complete = true;
  std::string failure;

  /// Throws std::logic_error unless step indices increase.
  void append(TrajectoryRecord record);
  const TrajectoryRecord& last() const;
};

/// Formats with 17 significant digits ("%.17g"); empty for nullopt.
std::string format_number(std::optional<double> value);

/// Header: step, loss, grad_norm[, many_queries_accuracy, single_shot_accuracy],
/// failed_samples, output columns, parameter columns.
void write_trajectory_csv(const Trajectory& t, std::ostream& out);

/// Run manifest: experiment, status, config, seed, version, equilibrations.
nlohmann::json trajectory_manifest(const Trajectory& t);

/// Library version string recorded in manifests.
std::string_view software_version();

}  // namespace qep
