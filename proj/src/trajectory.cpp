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

#include "qep/trajectory.hpp"

#include <cstdio>
#include <stdexcept>

namespace qep {

void Trajectory::append(TrajectoryRecord record) {
  if (!records.empty() && record.step <= records.back().step) {
    throw std::logic_error("trajectory steps must increase");
  }
  records.push_back(std::move(record));
}

const TrajectoryRecord& Trajectory::last() const {
  if (records.empty()) throw std::logic_error("empty trajectory");
  return records.back();
}

std::string format_number(std::optional<double> value) {
  if (!value) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *value);
  return buf;
}

void write_trajectory_csv(const Trajectory& t, std::ostream& out) {
  out << "step,loss,grad_norm";
  if (t.records_accuracy) out << ",many_queries_accuracy,single_shot_accuracy";
  out << ",failed_samples";
  for (const auto& l : t.output_labels) out << ",out:" << l;
  for (const auto& l : t.param_labels) out << ',' << l;
  out << '\n';
  for (const auto& r : t.records) {
    out << r.step << ',' << format_number(r.loss) << ',' << format_number(r.grad_norm);
    if (t.records_accuracy) {
      out << ',' << format_number(r.many_queries_accuracy) << ','
          << format_number(r.single_shot_accuracy);
    }
    out << ',' << r.failed_samples;
    for (std::size_t i = 0; i < t.output_labels.size(); ++i) {
      out << ',' << (i < r.outputs.size() ? format_number(r.outputs[i]) : std::string());
    }
    for (std::size_t i = 0; i < t.param_labels.size(); ++i) {
      out << ',' << (i < r.params.size() ? format_number(r.params[i]) : std::string());
    }
    out << '\n';
  }
}

nlohmann::json trajectory_manifest(const Trajectory& t) {
  nlohmann::json m;
  m["experiment"] = t.experiment;
  m["status"] = t.complete ? "COMPLETE" : "INCOMPLETE";
  if (!t.complete) m["failure"] = t.failure;
  m["config"] = t.config;
  m["seed"] = t.seed;
  m["software_version"] = software_version();
  m["equilibrations"] = t.equilibrations;
  m["steps_recorded"] = t.records.size();
  return m;
}

std::string_view software_version() { return QEP_VERSION; }

}  // namespace qep
