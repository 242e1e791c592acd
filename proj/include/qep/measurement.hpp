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
#include <string>
#include <vector>

#include "qep/eigensolver.hpp"
#include "qep/pauli.hpp"
#include "qep/random.hpp"

namespace qep {

/// Number of projective shots behind one expectation value.  Infinite shots
/// return exact values.
class ShotModel {
 public:
  static ShotModel infinite(std::uint64_t rng_seed = 0) { return ShotModel(std::nullopt, rng_seed); }
  /// Throws std::invalid_argument for shots < 1.
  static ShotModel finite(int shots, std::uint64_t rng_seed);

  bool is_infinite() const { return !shots_; }
  /// Throws std::logic_error when infinite.
  int shots() const;
  std::uint64_t rng_seed() const { return rng_seed_; }
  ShotModel with_seed(std::uint64_t seed) const { return ShotModel(shots_, seed); }
  std::string str() const;

 private:
  ShotModel(std::optional<int> shots, std::uint64_t seed) : shots_(shots), rng_seed_(seed) {}
  std::optional<int> shots_;
  std::uint64_t rng_seed_;
};

/// Eigenvalue pair (z1, z2) of the two sensor Z operators.
class OutcomeCombo {
 public:
  /// Throws std::invalid_argument unless both values are +1 or -1.
  OutcomeCombo(int z1, int z2);

  int z1() const { return z1_; }
  int z2() const { return z2_; }
  /// 0..3 in the order (+1,+1), (+1,-1), (-1,+1), (-1,-1).
  int index() const { return (z1_ < 0 ? 2 : 0) + (z2_ < 0 ? 1 : 0); }
  static OutcomeCombo from_index(int index);
  std::string str() const;

  friend bool operator==(const OutcomeCombo&, const OutcomeCombo&) = default;

 private:
  int z1_;
  int z2_;
};

/// (1 + z1 Z_a)(1 + z2 Z_b) / 4 as a Pauli sum.
PauliSum outcome_projector_sum(const OutcomeCombo& combo, std::array<int, 2> sensor_sites,
                               int n_total);
/// Throws std::invalid_argument for equal or out-of-range sites.
SparseOperator outcome_projector(const OutcomeCombo& combo, std::array<int, 2> sensor_sites,
                                 int n_total);

/// Exact value plus N(0, (second_moment - mean^2) / M) noise drawn from \p rng;
/// the mean itself for infinite shots.  Negative variances from round-off
/// are clamped to zero.  No clipping to the operator's spectral range.
double noisy_expectation(double mean, double second_moment, const ShotModel& shots, Rng& rng);
/// As above with the generator seeded from shots.rng_seed().
double noisy_expectation(const SparseOperator& op, const StateVector& psi,
                         const ShotModel& shots);

/// Born probabilities of the four combos, indexed by OutcomeCombo::index().
std::array<double, 4> born_probabilities(const Amplitudes& psi, std::array<int, 2> sensor_sites);
/// Ground-space averaged probabilities.
std::array<double, 4> born_probabilities(const GroundStateResult& gs,
                                         std::array<int, 2> sensor_sites);

OutcomeCombo sample_outcome(const std::array<double, 4>& probabilities, Rng& rng);
OutcomeCombo single_shot(const StateVector& psi, std::array<int, 2> sensor_sites, Rng& rng);

/// Fraction of samples whose argmax matches the label; ties go to the
/// lowest index.  Throws on size mismatch or negative probabilities.
double many_queries_accuracy(std::span<const std::array<double, 3>> predicted,
                             std::span<const int> labels);

/// Fraction of samples whose sampled combo equals the label combo.  With
/// votes > 1 each sample draws that many outcomes and keeps the most
/// frequent one (ties resolved by first occurrence).
double single_shot_accuracy(std::span<const std::array<double, 4>> born,
                            std::span<const OutcomeCombo> labels, Rng& rng, int votes = 1);
double single_shot_accuracy(std::span<const StateVector> states,
                            std::span<const OutcomeCombo> labels,
                            std::array<int, 2> sensor_sites, Rng& rng, int votes = 1);

}  // namespace qep
