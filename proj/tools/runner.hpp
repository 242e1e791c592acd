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
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace qep::cli {

struct AuditEntry {
  int instance = 0;
  std::string j;
  std::string l;
  /// Central differences d<A_l>/dlambda_j and d<A_j>/dlambda_l.
  double chi_jl = 0.0;
  double chi_lj = 0.0;
  /// Perturbation-theory values of the same two susceptibilities.
  double exact_jl = 0.0;
  double exact_lj = 0.0;
};

struct AuditResult {
  std::vector<AuditEntry> entries;
  /// Random draws discarded for a degenerate or near-degenerate ground state.
  int rejected_draws = 0;
  double max_asymmetry = 0.0;
  /// Largest |exact - finite difference| over both directions.
  double max_exact_error = 0.0;
};

/// Reciprocity audit over random Hamiltonians with gap > config.min_gap,
/// each with \p pairs distinct random parameter pairs.
AuditResult onsager_reciprocity_audit(const AuditConfig& config);

/// Runs the configured experiment and writes trajectory.csv, summary.csv and
/// manifest.json into \p out_dir (created if needed).  Returns 0 on success
/// and 1 when the experiment failed; the manifest then reads INCOMPLETE.
/// Progress lines go to \p log.
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace qep::cli
