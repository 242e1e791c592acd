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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qep/eigensolver.hpp"
#include "qep/hamiltonian.hpp"
#include "qep/phase.hpp"
#include "qep/qep.hpp"
#include "qep/trajectory.hpp"

namespace qep {

/// Chain-side letters allowed in sensor-chain couplings.
enum class CouplingSet { Full, XZ, Z };

std::string_view to_string(CouplingSet c);
CouplingSet coupling_set_from_string(std::string_view text);
std::vector<PauliLetter> chain_letters(CouplingSet c);

/// Everything needed to turn (phase point, sensor couplings) into a
/// Hamiltonian with the three classification outputs.
struct ClassifierSetup {
  int chain_length = 8;
  Boundary boundary = Boundary::Periodic;
  std::array<int, 2> attach_sites{3, 4};
  CouplingSet couplings = CouplingSet::Full;
  LabelMap labels;

  SensorArchitecture architecture() const;
  /// Sensor sites in the full system (after the chain).
  std::array<int, 2> sensor_sites() const { return {chain_length, chain_length + 1}; }
  std::size_t parameter_count() const { return architecture().parameter_count(); }
};

/// Chain at \p p (Input roles) plus sensor couplings \p theta (Trainable) and
/// one projector output per PhaseLabel, in label order.
ParameterizedHamiltonian build_classifier(const ClassifierSetup& setup, const PhasePoint& p,
                                          std::span<const double> theta);

/// Output labels of build_classifier, in PhaseLabel order.
std::vector<std::string> classifier_output_labels();

struct LabeledPoint {
  PhasePoint point;
  PhaseLabel label = PhaseLabel::Cluster;
};

struct SupervisedConfig {
  ClassifierSetup setup;
  int label_chain_length = 8;
  int batch_size = 10;
  int batches = 300;
  /// Shots per expectation value; nullopt means exact expectations.
  std::optional<int> shots = 10;
  double beta = 0.4;
  NudgeKind scheme = NudgeKind::Symmetric;
  double learning_rate = 0.01;
  double init_scale = 0.1;
  int test_size = 200;
  int eval_interval = 10;
  /// Evaluations without a new best many-queries accuracy before stopping;
  /// 0 disables early stopping.
  int patience = 10;
  /// Training points are drawn near the corners only when set.
  std::optional<double> restricted_radius;
  int single_shot_votes = 1;
  std::uint64_t seed = 0;
  LanczosOptions lanczos;
};

/// Fixed test set drawn from the (seed, test-set) stream.
std::vector<LabeledPoint> make_test_set(int size, int label_chain_length, Boundary boundary,
                                        std::uint64_t seed);

/// Initial couplings, uniform in [-scale, scale] from the (seed, init) stream.
std::vector<double> initial_couplings(std::size_t n, double scale, std::uint64_t seed);

struct ClassifierEvaluation {
  double many_queries_accuracy = 0.0;
  double single_shot_accuracy = 0.0;
  /// Probabilities of the three label outcomes per test point.
  std::vector<std::array<double, 3>> probabilities;
};

/// Accuracies on \p test.  When \p cache is non-null it holds one ground state
/// per test point; each entry warm-starts the next solve and is replaced.
ClassifierEvaluation evaluate_classifier(const ClassifierSetup& setup,
                                         std::span<const double> theta,
                                         std::span<const LabeledPoint> test, Rng& single_shot_rng,
                                         int votes = 1, const LanczosOptions& lanczos = {},
                                         std::vector<GroundStateResult>* cache = nullptr);

/// One row per point of a triangular grid with \p resolution subdivisions:
/// (g_zxz, g_zz, g_x, p_cluster, p_ferromagnetic, p_paramagnetic).
std::vector<std::array<double, 6>> probability_grid(const ClassifierSetup& setup,
                                                    std::span<const double> theta,
                                                    int resolution,
                                                    const LanczosOptions& lanczos = {});

/// Mini-batch QEP training of the sensor couplings with Adam.  Record 0
/// holds the initial couplings and accuracies; record b holds batch b's
/// loss, gradient norm and mean outputs, and the couplings after its update.
/// Failed batches (fewer than half the samples solved) end the run with
/// complete = false.
Trajectory train_supervised(const SupervisedConfig& config);

}  // namespace qep
