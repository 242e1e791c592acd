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
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qep/pauli.hpp"

namespace qep {

enum class ParameterRole { Input, Trainable, OutputNudge };

std::string_view to_string(ParameterRole role);
ParameterRole role_from_string(std::string_view text);

/// One coupling of H = sum_j lambda_j A_j.  A logical parameter that fans out
/// over several physical terms (a uniform field on every site, say) keeps
/// all of them inside \c op, so \c op is the conjugate observable dH/dlambda.
struct HamiltonianTerm {
  std::string label;
  ParameterRole role = ParameterRole::Input;
  double coefficient = 0.0;
  PauliSum op;
};

/// Observable read out as y_l = <O_l>.  Nudging adds nu_l * O_l to H.
struct OutputObservable {
  std::string label;
  PauliSum op;
};

class ParameterizedHamiltonian {
 public:
  explicit ParameterizedHamiltonian(int n_sites);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return std::size_t{1} << n_sites_; }

  /// Throws std::invalid_argument on a duplicate label, a non-finite
  /// coefficient or an operator on the wrong number of sites.
  void add_term(HamiltonianTerm term);
  void add_term(std::string label, ParameterRole role, double coefficient, PauliSum op);
  void add_output(std::string label, PauliSum op);

  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const std::vector<OutputObservable>& outputs() const { return outputs_; }

  std::optional<std::size_t> find_term(std::string_view label) const;
  const HamiltonianTerm& term(std::string_view label) const;
  /// Operator of a term or of an output observable with this label.
  const PauliSum& observable(std::string_view label) const;

  std::vector<std::size_t> indices(ParameterRole role) const;
  std::vector<std::string> labels(ParameterRole role) const;
  std::vector<double> coefficients(ParameterRole role) const;

  ParameterizedHamiltonian with_coefficient(std::string_view label, double value) const;
  /// Replaces the coefficients of every term with \p role, in term order.
  ParameterizedHamiltonian with_coefficients(ParameterRole role,
                                             std::span<const double> values) const;

  /// sum_j lambda_j A_j with identical strings merged.
  PauliSum as_pauli_sum() const;
  /// Number of physical Pauli strings over all terms (before merging).
  std::size_t pauli_string_count() const;

 private:
  void check_label(std::string_view label) const;

  int n_sites_;
  std::vector<HamiltonianTerm> terms_;
  std::vector<OutputObservable> outputs_;
};

SparseOperator assemble(const ParameterizedHamiltonian& h);

/// h + sum_l nu_l O_l as OutputNudge terms labelled "nudge:<output>".
/// Throws if nu does not have one entry per output observable.
ParameterizedHamiltonian with_nudge(const ParameterizedHamiltonian& h,
                                    std::span<const double> nu);

/// Pads every string of \p op with identities up to \p n_sites.
PauliSum extend(const PauliSum& op, int n_sites);

enum class Boundary { Periodic, Open };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view text);

struct ClusterIsingRoles {
  ParameterRole zxz = ParameterRole::Input;
  ParameterRole zz = ParameterRole::Input;
  ParameterRole x = ParameterRole::Input;
};

/// H0 = g_zxz sum Z_{j-1} X_j Z_{j+1} - g_zz sum Z_j Z_{j+1} - g_x sum X_j
/// as three logical parameters "g_zxz", "g_zz", "g_x".  Each parameter's
/// operator carries the sign, e.g. the "g_x" operator is -sum X_j.
/// Periodic chains have 3n strings, open chains (n-2) + (n-1) + n.
ParameterizedHamiltonian build_cluster_ising(double g_zxz, double g_zz, double g_x,
                                             int n, Boundary boundary = Boundary::Periodic,
                                             ClusterIsingRoles roles = {});

/// Two-qubit sensor coupled 2-locally to two chain sites.  The sensor
/// qubits sit after the chain (sites n and n+1).
struct SensorArchitecture {
  std::array<int, 2> attach_sites{3, 4};
  /// Chain-side letters allowed in sensor-chain couplings; {Z} and {X, Z}
  /// give the restricted-coupling ablations.
  std::vector<PauliLetter> chain_letters{PauliLetter::X, PauliLetter::Y, PauliLetter::Z};

  /// 6 single-qubit + 9 two-qubit sensor terms plus 2 * 2 * 3 * |chain_letters|
  /// sensor-chain terms (51 with all letters).
  std::size_t parameter_count() const;
};

/// Chain (padded to n + 2 sites) plus one Trainable term per sensor coupling,
/// labelled e.g. "s0:X", "s0s1:XY", "s1c4:ZX".
ParameterizedHamiltonian build_sensor_system(const ParameterizedHamiltonian& chain,
                                             const SensorArchitecture& arch,
                                             std::span<const double> theta);

nlohmann::json to_json(const PauliSum& op);
PauliSum pauli_sum_from_json(const nlohmann::json& j, int n_sites);
nlohmann::json to_json(const ParameterizedHamiltonian& h);
ParameterizedHamiltonian hamiltonian_from_json(const nlohmann::json& j);

}  // namespace qep
