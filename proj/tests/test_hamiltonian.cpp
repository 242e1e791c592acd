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

#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "qep/eigensolver.hpp"
#include "qep/hamiltonian.hpp"
#include "qep/measurement.hpp"
#include "qep/qep.hpp"

using namespace qep;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("cluster Ising term counts by boundary", "[hamiltonian]") {
  const auto periodic = build_cluster_ising(1.0, 1.0, 1.0, 8, Boundary::Periodic);
  CHECK(periodic.pauli_string_count() == 24);
  CHECK(periodic.dim() == 256);
  CHECK(assemble(periodic).is_hermitian());
  const auto open = build_cluster_ising(1.0, 1.0, 1.0, 8, Boundary::Open);
  CHECK(open.pauli_string_count() == 6 + 7 + 8);
  CHECK(periodic.terms().size() == 3);
  CHECK_THROWS_AS(build_cluster_ising(1.0, 1.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("pure transverse field gives the |+...+> product state", "[hamiltonian]") {
  for (int n : {5, 6}) {
    const auto h = build_cluster_ising(0.0, 0.0, 1.0, n);
    const auto gs = ground_state(assemble(h));
    CHECK_THAT(gs.energy, WithinAbs(-n, 1e-10));
    const auto xx = realize(PauliString::on_sites(n, {{0, PauliLetter::X}, {4, PauliLetter::X}}));
    CHECK_THAT(gs.expectation(xx), WithinAbs(1.0, 1e-10));
  }
}

TEST_CASE("cluster Ising ground energy matches dense diagonalisation", "[hamiltonian]") {
  const auto h = build_cluster_ising(1.0, 0.7, 0.3, 4);
  const auto dense = testing::dense_hamiltonian(h);
  CHECK(max_abs_diff(assemble(h).to_dense(), dense) < 1e-14);
  const auto spectrum = testing::dense_spectrum(dense);
  CHECK_THAT(ground_state(assemble(h)).energy, WithinAbs(spectrum.energies[0], 1e-10));
}

TEST_CASE("cluster Ising operators carry the sign convention", "[hamiltonian]") {
  const auto h = build_cluster_ising(0.0, 0.0, 1.0, 3, Boundary::Open);
  const auto dense = testing::dense_hamiltonian(h);
  const testing::DenseMatrix expected =
      -(testing::dense_pauli("XII") + testing::dense_pauli("IXI") + testing::dense_pauli("IIX"));
  CHECK(max_abs_diff(dense, expected) < 1e-14);
  const auto zxz = build_cluster_ising(1.0, 0.0, 0.0, 3, Boundary::Open);
  CHECK(max_abs_diff(testing::dense_hamiltonian(zxz), testing::dense_pauli("ZXZ")) < 1e-14);
  const auto zz = build_cluster_ising(0.0, 1.0, 0.0, 3, Boundary::Open);
  CHECK(max_abs_diff(testing::dense_hamiltonian(zz),
                     -(testing::dense_pauli("ZZI") + testing::dense_pauli("IZZ"))) < 1e-14);
}

TEST_CASE("sensor architecture has 51 couplings on 10 sites", "[hamiltonian]") {
  SensorArchitecture arch;
  CHECK(arch.parameter_count() == 15 + 36);
  const auto chain = build_cluster_ising(1.0, 1.0, 2.0, 8);
  const std::vector<double> theta(51, 0.1);
  const auto h = build_sensor_system(chain, arch, theta);
  CHECK(h.n_sites() == 10);
  CHECK(h.dim() == 1024);
  CHECK(h.indices(ParameterRole::Trainable).size() == 51);
  CHECK(h.indices(ParameterRole::Input).size() == 3);
  CHECK(h.find_term("s1c4:ZX").has_value());
  CHECK(h.find_term("s0s1:XY").has_value());
  CHECK(SensorArchitecture{{3, 4}, {PauliLetter::Z}}.parameter_count() == 15 + 12);
  CHECK_THROWS_AS(build_sensor_system(chain, arch, std::vector<double>(50, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_sensor_system(chain, SensorArchitecture{{3, 8}, {PauliLetter::Z}},
                                      std::vector<double>(27, 0.0)),
                  std::out_of_range);
}

TEST_CASE("a decoupled sensor leaves the chain untouched", "[hamiltonian]") {
  const auto chain = build_cluster_ising(1.3, 1.5, 1.2, 6);
  const auto h = build_sensor_system(chain, SensorArchitecture{}, std::vector<double>(51, 0.0));
  const auto bare = ground_state(assemble(chain));
  const auto coupled = ground_state(assemble(h));
  CHECK_THAT(coupled.energy, WithinAbs(bare.energy, 1e-10));
  // Four-fold sensor degeneracy on top of the chain ground state.
  CHECK(coupled.degeneracy() == 4);
  const PauliSum zz(1.0, PauliString::on_sites(6, {{0, PauliLetter::Z}, {3, PauliLetter::Z}}));
  CHECK_THAT(coupled.expectation(extend(zz, 8)), WithinAbs(bare.expectation(zz), 1e-10));
}

TEST_CASE("assembly of empty and single-term Hamiltonians", "[hamiltonian]") {
  ParameterizedHamiltonian empty(2);
  CHECK(assemble(empty).matrix().nonZeros() == 0);
  ParameterizedHamiltonian single(1);
  single.add_term("z", ParameterRole::Input, 2.0, PauliSum(1.0, PauliString::parse("Z")));
  Eigen::MatrixXcd expected(2, 2);
  expected << 2, 0, 0, -2;
  CHECK(max_abs_diff(assemble(single).to_dense(), expected) == 0.0);
}

TEST_CASE("random Hamiltonians match dense summation", "[hamiltonian][property]") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto h = random_hamiltonian(4, 8, rng);
    CHECK(max_abs_diff(assemble(h).to_dense(), testing::dense_hamiltonian(h)) < 1e-13);
  }
}

TEST_CASE("assembly is linear in each coefficient", "[hamiltonian][property]") {
  Rng rng(9);
  const auto h = random_hamiltonian(4, 6, rng);
  for (const auto& t : h.terms()) {
    const auto shifted = h.with_coefficient(t.label, t.coefficient + 0.25);
    const Eigen::MatrixXcd diff = assemble(shifted).to_dense() - assemble(h).to_dense();
    CHECK(max_abs_diff(diff, 0.25 * realize(t.op).to_dense()) < 1e-14);
  }
}

TEST_CASE("nudging adds the output observables", "[hamiltonian]") {
  auto h = build_cluster_ising(1.0, 0.5, 0.8, 4);
  const auto p = outcome_projector_sum(OutcomeCombo(1, -1), {2, 3}, 4);
  h.add_output("p", p);
  const auto free = assemble(h).to_dense();
  const std::vector<double> zero{0.0};
  CHECK(max_abs_diff(assemble(with_nudge(h, zero)).to_dense(), free) == 0.0);
  const std::vector<double> nu{0.3};
  const auto nudged = with_nudge(h, nu);
  CHECK(max_abs_diff(assemble(nudged).to_dense(), free + 0.3 * testing::dense_sum(p)) < 1e-14);
  CHECK(nudged.term("nudge:p").role == ParameterRole::OutputNudge);
  CHECK(h.terms().size() == 3);
  const std::vector<double> wrong{0.1, 0.2};
  CHECK_THROWS_AS(with_nudge(h, wrong), std::invalid_argument);

  // Variational bound E(beta) <= E(0) + beta <P>_0.
  const auto gs = ground_state(assemble(h));
  for (double beta : {0.01, 0.05, 0.1}) {
    const std::vector<double> b{beta};
    const double e = ground_state(assemble(with_nudge(h, b))).energy;
    CHECK(e <= gs.energy + beta * gs.expectation(p) + 1e-12);
  }
}

TEST_CASE("labels are unique and coefficients finite", "[hamiltonian][errors]") {
  ParameterizedHamiltonian h(2);
  h.add_term("a", ParameterRole::Input, 1.0, PauliSum(1.0, PauliString::parse("XX")));
  CHECK_THROWS_AS(h.add_term("a", ParameterRole::Input, 1.0, PauliSum(1.0, PauliString::parse("ZZ"))),
                  std::invalid_argument);
  CHECK_THROWS_AS(h.add_term("b", ParameterRole::Input, INFINITY, PauliSum(1.0, PauliString::parse("ZZ"))),
                  std::invalid_argument);
  CHECK_THROWS_AS(h.add_term("c", ParameterRole::Input, 1.0, PauliSum(1.0, PauliString::parse("Z"))),
                  std::invalid_argument);
  CHECK_THROWS_AS(h.add_output("a", PauliSum(1.0, PauliString::parse("ZZ"))), std::invalid_argument);
}

TEST_CASE("roles partition the terms", "[hamiltonian][property]") {
  const auto chain = build_cluster_ising(1.0, 1.0, 2.0, 6);
  auto h = build_sensor_system(chain, SensorArchitecture{}, std::vector<double>(51, 0.2));
  h.add_output("p", outcome_projector_sum(OutcomeCombo(1, 1), {6, 7}, 8));
  const std::vector<double> nu{0.1};
  const auto nudged = with_nudge(h, nu);
  std::size_t total = 0;
  for (auto role : {ParameterRole::Input, ParameterRole::Trainable, ParameterRole::OutputNudge}) {
    total += nudged.indices(role).size();
  }
  CHECK(total == nudged.terms().size());
}

TEST_CASE("Hamiltonians round-trip through JSON", "[hamiltonian]") {
  const auto chain = build_cluster_ising(1.0, 0.4, 2.0, 4, Boundary::Open);
  auto h = build_sensor_system(chain, SensorArchitecture{{1, 2}, {PauliLetter::X, PauliLetter::Z}},
                               std::vector<double>(39, -0.3));
  h.add_output("p", outcome_projector_sum(OutcomeCombo(-1, -1), {4, 5}, 6));
  const auto j = to_json(h);
  const auto back = hamiltonian_from_json(nlohmann::json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(max_abs_diff(assemble(back).to_dense(), assemble(h).to_dense()) == 0.0);
  CHECK(back.term("s0c1:XZ").role == ParameterRole::Trainable);
  CHECK(role_from_string("output_nudge") == ParameterRole::OutputNudge);
  CHECK_THROWS_AS(role_from_string("bias"), std::invalid_argument);
  CHECK(boundary_from_string("open") == Boundary::Open);
}
