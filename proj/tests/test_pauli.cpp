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

#include <cmath>

#include "oracles.hpp"
#include "qep/pauli.hpp"

using namespace qep;
using Catch::Matchers::WithinAbs;

namespace {

std::string random_letters(int n, Rng& rng) {
  static const char kLetters[] = "IXYZ";
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s;
  for (int i = 0; i < n; ++i) s.push_back(kLetters[pick(rng)]);
  return s;
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("single-qubit X realizes the swap matrix", "[pauli]") {
  const auto m = realize(PauliString::parse("X")).to_dense();
  Eigen::MatrixXcd expected(2, 2);
  expected << 0, 1, 1, 0;
  CHECK(max_abs_diff(m, expected) == 0.0);
}

TEST_CASE("ZZ is diagonal (+1, -1, -1, +1)", "[pauli]") {
  const auto m = realize(PauliString::parse("ZZ")).to_dense();
  Eigen::VectorXcd diag(4);
  diag << 1, -1, -1, 1;
  CHECK(max_abs_diff(m, Eigen::MatrixXcd(diag.asDiagonal())) == 0.0);
}

TEST_CASE("ZXZ matches the dense Kronecker oracle", "[pauli]") {
  const auto m = realize(PauliString::parse("ZXZ")).to_dense();
  CHECK(max_abs_diff(m, testing::dense_pauli("ZXZ")) == 0.0);
}

TEST_CASE("random strings match the Kronecker oracle and are Hermitian involutions",
          "[pauli][property]") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 5;
    const auto letters = random_letters(n, rng);
    const auto p = PauliString::parse(letters);
    const auto op = realize(p);
    INFO(letters);
    CHECK(max_abs_diff(op.to_dense(), testing::dense_pauli(letters)) == 0.0);
    CHECK(op.is_hermitian(0.0));
    CHECK(op.matrix().nonZeros() == static_cast<Eigen::Index>(p.dim()));
    const Amplitudes v = testing::random_state(p.dim(), rng);
    CHECK((op.apply(op.apply(v)) - v).norm() < 1e-14);
    Amplitudes direct = Amplitudes::Zero(v.size());
    p.apply_add(1.0, v, direct);
    CHECK((direct - op.apply(v)).norm() < 1e-14);
  }
}

TEST_CASE("site 0 is the most significant bit", "[pauli]") {
  const auto op = realize(PauliString::parse("XI"));
  const Amplitudes out = op.apply(StateVector::basis(4, 0).amplitudes());
  CHECK(std::abs(out[2] - cplx(1.0, 0.0)) == 0.0);
}

TEST_CASE("commutation relations hold on random vectors", "[pauli][property]") {
  Rng rng(5);
  const auto z0 = realize(PauliString::parse("ZII"));
  const auto z2 = realize(PauliString::parse("IIZ"));
  const auto x0 = realize(PauliString::parse("XII"));
  for (int trial = 0; trial < 5; ++trial) {
    const Amplitudes v = testing::random_state(8, rng);
    CHECK((z0.apply(z2.apply(v)) - z2.apply(z0.apply(v))).norm() < 1e-14);
    CHECK((x0.apply(z0.apply(v)) + z0.apply(x0.apply(v))).norm() < 1e-14);
  }
}

TEST_CASE("string equality follows the letters", "[pauli]") {
  CHECK(PauliString::parse("XZ") == PauliString::on_sites(2, {{0, PauliLetter::X}, {1, PauliLetter::Z}}));
  CHECK_FALSE(PauliString::parse("XZ") == PauliString::parse("ZX"));
  CHECK(PauliString::identity(3).is_identity());
  CHECK(PauliString::parse("IYZ").str() == "IYZ");
}

TEST_CASE("invalid strings are rejected", "[pauli][errors]") {
  CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::on_sites(3, {{3, PauliLetter::X}}), std::out_of_range);
  CHECK_THROWS_AS(PauliString::on_sites(3, {{1, PauliLetter::X}, {1, PauliLetter::Z}}),
                  std::invalid_argument);
}

TEST_CASE("expectation of X on |+> and |0>", "[pauli]") {
  const auto x = realize(PauliString::parse("X"));
  Amplitudes plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK_THAT(expectation(x, StateVector::normalized(plus)), WithinAbs(1.0, 1e-15));
  CHECK_THAT(expectation(x, StateVector::basis(2, 0)), WithinAbs(0.0, 1e-15));
}

TEST_CASE("random Pauli-sum expectations match the dense oracle", "[pauli][property]") {
  Rng rng(3);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    PauliSum sum(3);
    for (int k = 0; k < 6; ++k) sum.add(c(rng), PauliString::parse(random_letters(3, rng)));
    const auto psi = StateVector::normalized(testing::random_state(8, rng));
    const auto dense = testing::dense_sum(sum);
    const double oracle =
        psi.amplitudes().dot(dense * psi.amplitudes()).real();
    CHECK_THAT(expectation(realize(sum), psi), WithinAbs(oracle, 1e-12));
    CHECK_THAT(sum.expectation(psi), WithinAbs(oracle, 1e-12));
    CHECK_THAT(sum.second_moment(psi.amplitudes()),
               WithinAbs((dense * psi.amplitudes()).squaredNorm(), 1e-12));
    CHECK(realize(sum).is_hermitian(1e-14));
  }
}

TEST_CASE("identical strings merge and dimensions are checked", "[pauli]") {
  PauliSum s(2);
  s.add(0.5, PauliString::parse("XZ")).add(0.25, PauliString::parse("XZ"));
  REQUIRE(s.terms().size() == 1);
  CHECK(s.terms().front().coefficient == 0.75);
  CHECK_THROWS_AS(s.add(1.0, PauliString::parse("X")), std::invalid_argument);
  CHECK_THROWS_AS(s.add(NAN, PauliString::parse("XX")), std::invalid_argument);
  const auto op = realize(PauliString::parse("XX"));
  CHECK_THROWS_AS(expectation(op, StateVector::basis(8, 0)), std::invalid_argument);
}

TEST_CASE("state vectors are normalised", "[pauli]") {
  Amplitudes a(4);
  a << 1.0, 2.0, cplx(0.0, 2.0), 4.0;
  CHECK_THAT(StateVector::normalized(a).amplitudes().norm(), WithinAbs(1.0, 1e-12));
  CHECK_THROWS_AS(StateVector::normalized(Amplitudes::Zero(4)), std::invalid_argument);
}

TEST_CASE("sparse operators must be square powers of two", "[pauli][errors]") {
  CHECK_THROWS_AS(SparseOperator(SparseOperator::Matrix(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(SparseOperator(SparseOperator::Matrix(4, 2)), std::invalid_argument);
  CHECK(SparseOperator::zero(8).matrix().nonZeros() == 0);
}
