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

#include "qep/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qep {

AdamState AdamState::create(std::size_t n, double learning_rate) {
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw std::invalid_argument("learning rate must be finite and >= 0");
  }
  AdamState s;
  s.first_moment.assign(n, 0.0);
  s.second_moment.assign(n, 0.0);
  s.learning_rate = learning_rate;
  return s;
}

std::pair<AdamState, std::vector<double>> adam_step(const AdamState& state,
                                                     std::span<const double> grad,
                                                     std::span<const double> params) {
  const std::size_t n = params.size();
  if (grad.size() != n || state.first_moment.size() != n || state.second_moment.size() != n) {
    throw std::invalid_argument("Adam state, gradient and parameters must have equal length");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(grad[i])) {
      throw std::invalid_argument("non-finite gradient component " + std::to_string(i));
    }
  }
  AdamState next = state;
  next.step_count += 1;
  const double c1 = 1.0 - std::pow(state.decay1, next.step_count);
  const double c2 = 1.0 - std::pow(state.decay2, next.step_count);
  std::vector<double> updated(params.begin(), params.end());
  for (std::size_t i = 0; i < n; ++i) {
    auto& m = next.first_moment[i];
    auto& v = next.second_moment[i];
    m = state.decay1 * m + (1.0 - state.decay1) * grad[i];
    v = state.decay2 * v + (1.0 - state.decay2) * grad[i] * grad[i];
    updated[i] -= state.learning_rate * (m / c1) / (std::sqrt(v / c2) + state.stabilizer);
  }
  return {std::move(next), std::move(updated)};
}

}  // namespace qep
