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
#include <vector>

#include "qep/supervised.hpp"

namespace qep {

struct NudgeSweepConfig {
  ClassifierSetup setup;
  int label_chain_length = 8;
  std::vector<double> betas{0.05, 0.1, 0.2, 0.4, 0.8};
  /// Shot counts to compare; nullopt is the noiseless limit.
  std::vector<std::optional<int>> shots{std::nullopt, 10};
  int batches = 30;
  int batch_size = 10;
  NudgeKind scheme = NudgeKind::Symmetric;
  /// Initial sensor couplings, uniform in [-init_scale, init_scale].
  double init_scale = 0.1;
  /// Supervised training batches (default training hyperparameters, same
  /// seed) run before the sweep; overlaps are measured at the couplings
  /// they reach.  0 measures at the initial couplings.
  int warmup_batches = 50;
  /// Explicit couplings; overrides init_scale and warmup_batches.
  std::optional<std::vector<double>> couplings;
  std::uint64_t seed = 0;
  LanczosOptions lanczos;
};

struct SweepCell {
  double beta = 0.0;
  std::optional<int> shots;
  /// One overlap per batch between the batch-averaged estimate and the true
  /// batch gradient.
  std::vector<double> overlaps;
  double median = 0.0;
};

struct NudgeSweepResult {
  /// Couplings at which the overlaps were measured.
  std::vector<double> couplings;
  /// Ordered by shots entry, then beta.
  std::vector<SweepCell> cells;
  std::uint64_t equilibrations = 0;

  /// Throws std::out_of_range when the cell is absent.
  const SweepCell& cell(std::optional<int> shots, double beta) const;
};

/// Median of a non-empty sample (mean of the two middle values when even).
double median(std::vector<double> values);

/// Overlap of batch-averaged QEP gradients with the exact loss gradient
/// for every (shots, beta) combination, on the same batches.  The exact
/// gradient comes from first-order perturbation theory, or from central
/// differences at degenerate points.
NudgeSweepResult nudge_sweep(const NudgeSweepConfig& config);

}  // namespace qep
