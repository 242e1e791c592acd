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

#include "qep/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qep {

ShotModel ShotModel::finite(int shots, std::uint64_t rng_seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  return ShotModel(shots, rng_seed);
}

int ShotModel::shots() const {
  if (!shots_) throw std::logic_error("infinite shot model has no shot count");
  return *shots_;
}

std::string ShotModel::str() const { return shots_ ? std::to_string(*shots_) : "inf"; }

OutcomeCombo::OutcomeCombo(int z1, int z2) : z1_(z1), z2_(z2) {
  if ((z1 != 1 && z1 != -1) || (z2 != 1 && z2 != -1)) {
    throw std::invalid_argument("outcome components must be +1 or -1");
  }
}

OutcomeCombo OutcomeCombo::from_index(int index) {
  if (index < 0 || index > 3) throw std::out_of_range("outcome index must be 0..3");
  return OutcomeCombo(index & 2 ? -1 : 1, index & 1 ? -1 : 1);
}

std::string OutcomeCombo::str() const {
  auto sign = [](int z) { return z > 0 ? std::string("+1") : std::string("-1"); };
  return "(" + sign(z1_) + "," + sign(z2_) + ")";
}

namespace {

void check_sites(std::array<int, 2> sites, int n_total) {
  for (int s : sites) {
    if (s < 0 || s >= n_total) throw std::invalid_argument("sensor site out of range");
  }
  if (sites[0] == sites[1]) throw std::invalid_argument("sensor sites must differ");
}

// Bit of \p site in a basis index (site 0 is the most significant bit).
std::uint64_t site_bit(int site, int n_total) {
  return std::uint64_t{1} << (n_total - 1 - site);
}

int n_sites_of(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

}  // namespace

PauliSum outcome_projector_sum(const OutcomeCombo& combo, std::array<int, 2> sensor_sites,
                               int n_total) {
  check_sites(sensor_sites, n_total);
  PauliSum p(n_total);
  p.add(0.25, PauliString::identity(n_total));
  p.add(0.25 * combo.z1(), PauliString::on_sites(n_total, {{sensor_sites[0], PauliLetter::Z}}));
  p.add(0.25 * combo.z2(), PauliString::on_sites(n_total, {{sensor_sites[1], PauliLetter::Z}}));
  p.add(0.25 * combo.z1() * combo.z2(),
        PauliString::on_sites(n_total, {{sensor_sites[0], PauliLetter::Z},
                                        {sensor_sites[1], PauliLetter::Z}}));
  return p;
}

SparseOperator outcome_projector(const OutcomeCombo& combo, std::array<int, 2> sensor_sites,
                                 int n_total) {
  return realize(outcome_projector_sum(combo, sensor_sites, n_total));
}

double noisy_expectation(double mean, double second_moment, const ShotModel& shots, Rng& rng) {
  if (shots.is_infinite()) return mean;
  const double variance = std::max(0.0, second_moment - mean * mean);
  std::normal_distribution<double> noise(0.0, std::sqrt(variance / shots.shots()));
  return mean + noise(rng);
}

double noisy_expectation(const SparseOperator& op, const StateVector& psi,
                         const ShotModel& shots) {
  const double mean = expectation(op, psi);
  if (shots.is_infinite()) return mean;
  const double second = op.apply(psi.amplitudes()).squaredNorm();
  Rng rng = make_stream(shots.rng_seed(), {stream::kShots});
  return noisy_expectation(mean, second, shots, rng);
}

std::array<double, 4> born_probabilities(const Amplitudes& psi, std::array<int, 2> sensor_sites) {
  const int n = n_sites_of(static_cast<std::size_t>(psi.size()));
  check_sites(sensor_sites, n);
  const auto b1 = site_bit(sensor_sites[0], n);
  const auto b2 = site_bit(sensor_sites[1], n);
  std::array<double, 4> p{};
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    // Bit value 0 is the Z = +1 eigenstate.
    const int idx = ((u & b1) ? 2 : 0) + ((u & b2) ? 1 : 0);
    p[idx] += std::norm(psi[i]);
  }
  return p;
}

std::array<double, 4> born_probabilities(const GroundStateResult& gs,
                                         std::array<int, 2> sensor_sites) {
  if (gs.degenerate_states.empty()) {
    return born_probabilities(gs.state.amplitudes(), sensor_sites);
  }
  std::array<double, 4> avg{};
  for (const auto& s : gs.degenerate_states) {
    const auto p = born_probabilities(s.amplitudes(), sensor_sites);
    for (int k = 0; k < 4; ++k) avg[k] += p[k];
  }
  for (auto& v : avg) v /= static_cast<double>(gs.degenerate_states.size());
  return avg;
}

OutcomeCombo sample_outcome(const std::array<double, 4>& probabilities, Rng& rng) {
  std::discrete_distribution<int> dist(probabilities.begin(), probabilities.end());
  return OutcomeCombo::from_index(dist(rng));
}

OutcomeCombo single_shot(const StateVector& psi, std::array<int, 2> sensor_sites, Rng& rng) {
  return sample_outcome(born_probabilities(psi.amplitudes(), sensor_sites), rng);
}

double many_queries_accuracy(std::span<const std::array<double, 3>> predicted,
                             std::span<const int> labels) {
  if (predicted.size() != labels.size()) {
    throw std::invalid_argument("prediction/label count mismatch");
  }
  if (predicted.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const auto& p = predicted[i];
    for (double v : p) {
      if (!(v >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
    }
    const auto best = std::max_element(p.begin(), p.end()) - p.begin();
    if (best == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

double single_shot_accuracy(std::span<const std::array<double, 4>> born,
                            std::span<const OutcomeCombo> labels, Rng& rng, int votes) {
  if (born.size() != labels.size()) throw std::invalid_argument("state/label count mismatch");
  if (votes < 1) throw std::invalid_argument("votes must be >= 1");
  if (born.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < born.size(); ++i) {
    std::array<int, 4> counts{};
    std::array<int, 4> first_seen{4, 4, 4, 4};
    for (int v = 0; v < votes; ++v) {
      const int idx = sample_outcome(born[i], rng).index();
      if (counts[idx]++ == 0) first_seen[idx] = v;
    }
    int winner = 0;
    for (int k = 1; k < 4; ++k) {
      if (counts[k] > counts[winner] ||
          (counts[k] == counts[winner] && first_seen[k] < first_seen[winner])) {
        winner = k;
      }
    }
    if (winner == labels[i].index()) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(born.size());
}

double single_shot_accuracy(std::span<const StateVector> states,
                            std::span<const OutcomeCombo> labels,
                            std::array<int, 2> sensor_sites, Rng& rng, int votes) {
  std::vector<std::array<double, 4>> born;
  born.reserve(states.size());
  for (const auto& s : states) born.push_back(born_probabilities(s.amplitudes(), sensor_sites));
  return single_shot_accuracy(born, labels, rng, votes);
}

}  // namespace qep
