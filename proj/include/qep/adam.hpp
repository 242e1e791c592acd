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

#include <span>
#include <utility>
#include <vector>

namespace qep {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  int step_count = 0;
  double learning_rate = 1e-3;
  double decay1 = 0.9;
  double decay2 = 0.999;
  double stabilizer = 1e-8;

  /// Zero moments for \p n parameters.
  static AdamState create(std::size_t n, double learning_rate);
};

/// One bias-corrected Adam update.  Returns the new state and parameters;
/// throws std::invalid_argument on a length mismatch or a non-finite gradient
/// entry (the input state is never modified).
std::pair<AdamState, std::vector<double>> adam_step(const AdamState& state,
                                                     std::span<const double> grad,
                                                     std::span<const double> params);

}  // namespace qep
