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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qep/eigensolver.hpp"
#include "qep/hamiltonian.hpp"
#include "qep/measurement.hpp"

namespace qep {

/// dL/dy_l for every output observable.
struct ErrorSignal {
  std::vector<double> values;
};

/// 2 (y - target).  Throws std::invalid_argument on a length mismatch.
ErrorSignal mse_error_signal(std::span<const double> y, std::span<const double> target);

enum class NudgeKind { OneSided, Symmetric };

std::string_view to_string(NudgeKind kind);
NudgeKind nudge_kind_from_string(std::string_view text);

class NudgeScheme {
 public:
  /// Throws std::invalid_argument unless beta is finite and positive.
  NudgeScheme(NudgeKind kind, double beta);
  NudgeKind kind() const { return kind_; }
  double beta() const { return beta_; }

 private:
  NudgeKind kind_;
  double beta_;
};

struct GradientEstimate {
  /// One entry per trainable term, in term order.
  std::vector<double> values;
  NudgeScheme scheme;
  ShotModel shots;
  /// Measured <A_j> of every trainable term in the free phase.
  std::vector<double> free_expectations;
};

/// A ground-state solve that failed inside one phase of a gradient estimate.
class PhaseConvergenceError : public ConvergenceError {
 public:
  PhaseConvergenceError(std::string phase, const ConvergenceError& cause);
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

/// Two-phase gradient estimate of sum_l eps_l dy_l/dtheta_j for every
/// trainable theta_j.  Nudged phases add nu = +-beta * eps on the outputs.
/// OneSided: (<A_j>(+beta eps) - <A_j>(0)) / beta with 2 ground-state solves.
/// Symmetric: (<A_j>(+beta eps) - <A_j>(-beta eps)) / (2 beta) with 3 solves.
/// Expectations are ground-space averaged; with finite shots each phase gets
/// independent Gaussian noise from the stream (shots.rng_seed(), phase).
GradientEstimate qep_gradient(const ParameterizedHamiltonian& h, const ErrorSignal& eps,
                              const NudgeScheme& scheme, const ShotModel& shots,
                              const LanczosOptions& options = {});

/// Same estimate reusing an already solved free phase (1 or 2 further solves).
GradientEstimate qep_gradient(const ParameterizedHamiltonian& h,
                              const GroundStateResult& free_phase, const ErrorSignal& eps,
                              const NudgeScheme& scheme, const ShotModel& shots,
                              const LanczosOptions& options = {});

/// Phase tags of the shot-noise streams.
namespace phase {
inline constexpr std::uint64_t kFree = 0;
inline constexpr std::uint64_t kPlus = 1;
inline constexpr std::uint64_t kMinus = 2;
}  // namespace phase

/// Central difference d<O>/dtheta_j with step \p delta for every trainable
/// theta_j, where O is the term or output labelled \p output_label.  Costs
/// 2N + 1 solves (the unshifted solve warm-starts the shifted ones).
std::vector<double> parameter_shift_oracle(const ParameterizedHamiltonian& h,
                                           std::string_view output_label, double delta,
                                           const LanczosOptions& options = {});

/// Central-difference Jacobian, row l = output l, column j = trainable j.
std::vector<std::vector<double>> parameter_shift_jacobian(const ParameterizedHamiltonian& h,
                                                          double delta,
                                                          const LanczosOptions& options = {});

/// Central difference d<A_l>/dlambda_j.  Either label may name a term or an
/// output observable; an output used as \p j is perturbed by adding it as a
/// temporary zero-coefficient term.
double finite_difference_susceptibility(const ParameterizedHamiltonian& h, std::string_view j,
                                        std::string_view l, double delta,
                                        const LanczosOptions& options = {});

/// max |chi_jl - chi_lj| over \p pairs, both sides by central differences.
/// Throws DegenerateGroundStateError at a degenerate point.
double onsager_audit(const ParameterizedHamiltonian& h,
                     std::span<const std::pair<std::string, std::string>> pairs, double delta,
                     const LanczosOptions& options = {});

/// Exact sum_l eps_l dy_l/dtheta_j from first-order perturbation theory (one
/// linear solve).  Throws DegenerateGroundStateError for a degenerate
/// free phase.
std::vector<double> exact_loss_gradient(const ParameterizedHamiltonian& h,
                                        const SparseOperator& assembled,
                                        const GroundStateResult& free_phase,
                                        const ErrorSignal& eps, double tol = 1e-10);

/// Cosine of the angle between two vectors; 0 when either is zero.
double gradient_overlap(std::span<const double> estimate, std::span<const double> reference);

/// Random Hamiltonian with \p n_params Input terms, each a random Pauli
/// string of weight 1..3 with a coefficient uniform in [-1, 1].
ParameterizedHamiltonian random_hamiltonian(int n_sites, int n_params, Rng& rng);

}  // namespace qep
