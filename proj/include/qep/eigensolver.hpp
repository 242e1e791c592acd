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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qep/hamiltonian.hpp"
#include "qep/pauli.hpp"

namespace qep {

struct GroundStateResult;

struct LanczosOptions {
  /// Bound on ||H psi - E psi|| for every returned ground state.
  double tol = 1e-10;
  /// Cap on Lanczos steps per run.
  int max_iter = 1000;
  std::uint64_t seed = 0;
  /// Eigenvalues within deg_tol of E0 belong to the ground space.
  double deg_tol = 1e-8;
  /// Residual required of the first excited Ritz pair before the gap is
  /// trusted.
  double gap_residual = 1e-4;
  /// Optional nearby solution (e.g. the free-phase ground state when solving
  /// a nudged Hamiltonian).  Its ground and first excited vectors seed the
  /// Krylov runs; a small random admixture keeps every eigenvector reachable.
  const GroundStateResult* warm_start = nullptr;
};

/// Lowest eigenpair of a Hermitian operator plus a first-gap estimate.
struct GroundStateResult {
  double energy = 0.0;
  StateVector state = StateVector::basis(2, 0);
  /// E1 - E0 (zero up to deg_tol when the ground space is degenerate).
  double gap = 0.0;
  /// Orthonormal basis of the ground space when it is at least two-fold
  /// degenerate (includes \c state); empty otherwise.
  std::vector<StateVector> degenerate_states;
  /// Ritz vector of the first level above the ground space, when resolved.
  std::optional<StateVector> excited_state;
  double residual = 0.0;
  int matvecs = 0;

  std::size_t degeneracy() const {
    return degenerate_states.empty() ? 1 : degenerate_states.size();
  }
  /// Uniform average over the ground space, Tr(P A) / Tr(P).
  double expectation(const PauliSum& a) const;
  double expectation(const SparseOperator& a) const;
  /// Ground-space average of <A^2>.
  double second_moment(const PauliSum& a) const;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

class DegenerateGroundStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lanczos with full reorthogonalisation and locking: each run finds the
/// lowest eigenpair orthogonal to the vectors locked so far, until a run
/// lands above E0 + deg_tol.  That last run supplies the gap, and every
/// locked vector within deg_tol of E0 spans the ground space.
/// Deterministic for a given (operator, options).  Throws ConvergenceError
/// when a run exceeds max_iter steps.
GroundStateResult ground_state(const SparseOperator& h, const LanczosOptions& options = {});

/// Number of ground_state calls made by this process (all threads).
std::uint64_t equilibration_count();

/// Ground-space averaged <A> for Hamiltonian \p h.
double ground_expectation(const SparseOperator& h, const SparseOperator& a,
                          double deg_tol = 1e-8, const LanczosOptions& options = {});

/// Solves (H - E) x = -Q source on the complement of the ground state
/// (Q projects the ground state out), i.e. x = (E - H)^{-1} Q source.
/// Projected conjugate gradients; throws DegenerateGroundStateError for a
/// degenerate ground space and ConvergenceError if the solve stalls.
Amplitudes resolvent_apply(const SparseOperator& h, const GroundStateResult& gs,
                           const Amplitudes& source, double tol = 1e-10,
                           int max_iter = 20000);

/// First-order response d<A_k>/d(nu) of every observable in \p observables to
/// a perturbation nu * B: 2 Re <psi| A_k (E - H)^{-1} (B - <B>) |psi>.
std::vector<double> linear_response(const SparseOperator& h, const GroundStateResult& gs,
                                    const PauliSum& perturbation,
                                    const std::vector<const PauliSum*>& observables,
                                    double tol = 1e-10);

/// chi_{lj} = d<A_l>/d lambda_j for the term labelled \p j and the term or
/// output labelled \p l, from first-order perturbation theory.
double exact_susceptibility(const ParameterizedHamiltonian& h, std::string_view j,
                            std::string_view l, const LanczosOptions& options = {});

}  // namespace qep
