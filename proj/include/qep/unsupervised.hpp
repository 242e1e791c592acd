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
#include <stdexcept>

#include "qep/eigensolver.hpp"
#include "qep/hamiltonian.hpp"
#include "qep/qep.hpp"
#include "qep/trajectory.hpp"

namespace qep {

/// Settings shared by the two unsupervised experiments, whose output is the
/// correlator X_a X_b on a cluster-Ising chain with fixed g_zxz.
struct CorrelatorSetup {
  int chain_length = 10;
  Boundary boundary = Boundary::Periodic;
  double g_zxz = -0.5;
  std::array<int, 2> observable_sites{0, 4};
  double beta = 0.1;
  NudgeKind scheme = NudgeKind::Symmetric;
  double learning_rate = 0.1;
  int steps = 100;
  /// Exact expectations unless set.
  std::optional<int> shots;
  std::uint64_t seed = 0;
  LanczosOptions lanczos;
};

/// Chain with g_zz and g_x Trainable and the output "xx" = X_a X_b.
ParameterizedHamiltonian build_correlator_chain(const CorrelatorSetup& setup, double g_zz,
                                                double g_x);

struct ExploreConfig {
  CorrelatorSetup setup;
  double g_x = -0.1;
  double g_zz = 0.4;
};

/// Maximises <X_a X_b> (loss -<X_a X_b>, error signal -1) over (g_x, g_zz)
/// with QEP gradients and Adam.  Parameters are recorded as (g_x, g_zz).
Trajectory explore_phase(const ExploreConfig& config);

/// Two probe points differing only in g_x, sharing g_zz.
struct SensitivityState {
  double g_x_1 = 0.0;
  double g_x_2 = 0.0;
  double g_zz = 0.0;
};

class DegenerateQuotientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SensitivityGradient {
  /// -|(y1 - y2) / (g_x_1 - g_x_2)|.
  double loss = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;
  /// dL/d(g_x_1, g_x_2, g_zz).
  std::array<double, 3> grad{};
};

/// Loss and gradient of the probe-pair sensitivity at \p state.  The inner
/// derivatives dy_i/d(g_x, g_zz) come from QEP with unit error signal
/// -+sgn(y1 - y2) at each point; free phases optionally warm-start from
/// \p warm (updated in place).  Throws DegenerateQuotientError when
/// |g_x_1 - g_x_2| < 1e-6.
SensitivityGradient sensitivity_gradient(const CorrelatorSetup& setup,
                                         const SensitivityState& state,
                                         std::uint64_t shot_seed = 0,
                                         std::array<GroundStateResult, 2>* warm = nullptr);

/// Loss only, from two exact solves (finite-difference reference).
double sensitivity_loss(const CorrelatorSetup& setup, const SensitivityState& state);

struct SensitivityConfig {
  CorrelatorSetup setup;
  SensitivityState start{-0.2, -1.5, -1.5};
};

/// Adam descent on L = -|dy/dg_x| over (g_x_1, g_x_2, g_zz).  Outputs are
/// recorded as (y1, y2).
Trajectory optimize_sensitivity(const SensitivityConfig& config);

}  // namespace qep
