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
#include <string_view>

#include "qep/hamiltonian.hpp"
#include "qep/measurement.hpp"
#include "qep/random.hpp"

namespace qep {

struct PhasePoint {
  double g_zxz = 0.0;
  double g_zz = 0.0;
  double g_x = 0.0;

  double sum() const { return g_zxz + g_zz + g_x; }
};

enum class PhaseLabel { Cluster = 0, Ferromagnetic = 1, Paramagnetic = 2 };

std::string_view to_string(PhaseLabel label);

/// Uniform point of the triangle g_zxz + g_zz + g_x = 4, all >= 0.
PhasePoint sample_phase_point(Rng& rng);

/// Uniform point of the triangle within barycentric distance \p radius of a
/// corner, i.e. some coupling >= 4 (1 - radius).  Rejection sampled.
PhasePoint sample_restricted_phase_point(Rng& rng, double radius);

/// Normalised order parameters of the ground state, each in [0, 1].
struct OrderParameters {
  /// |sum_j <X_j>| / n.
  double transverse = 0.0;
  /// |<Z_0 Z_{n/2}>|.
  double ferro = 0.0;
  /// |<Z_0 Y_1 X_2 ... X_{n-3} Y_{n-2} Z_{n-1}>|, the product of the ZXZ
  /// stabilizers on sites 1..n-2.
  double string = 0.0;
};

OrderParameters order_parameters(const PhasePoint& p, int n, Boundary boundary = Boundary::Periodic);

/// Argmax of the three order parameters (ties to Cluster, then Ferromagnetic).
PhaseLabel phase_label(const PhasePoint& p, int n_label = 8,
                       Boundary boundary = Boundary::Periodic);

/// Measurement outcome assigned to each label, indexed by PhaseLabel.
struct LabelMap {
  std::array<OutcomeCombo, 3> combo{OutcomeCombo(1, 1), OutcomeCombo(1, -1),
                                    OutcomeCombo(-1, -1)};

  OutcomeCombo operator[](PhaseLabel label) const { return combo[static_cast<int>(label)]; }
  /// Throws std::invalid_argument unless the three combos are distinct.
  void validate() const;
};

}  // namespace qep
