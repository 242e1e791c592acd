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

#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace qep::testing {

DenseMatrix pauli_matrix(char letter) {
  const cplx i(0.0, 1.0);
  DenseMatrix m(2, 2);
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad letter");
  }
  return m;
}

DenseMatrix dense_pauli(const std::string& letters) {
  DenseMatrix out = DenseMatrix::Identity(1, 1);
  for (char c : letters) {
    DenseMatrix next = Eigen::kroneckerProduct(out, pauli_matrix(c)).eval();
    out = std::move(next);
  }
  return out;
}

DenseMatrix dense_sum(const PauliSum& sum) {
  const auto d = static_cast<Eigen::Index>(sum.dim());
  DenseMatrix out = DenseMatrix::Zero(d, d);
  for (const auto& t : sum.terms()) out += t.coefficient * dense_pauli(t.string.str());
  return out;
}

DenseMatrix dense_hamiltonian(const ParameterizedHamiltonian& h) {
  const auto d = static_cast<Eigen::Index>(h.dim());
  DenseMatrix out = DenseMatrix::Zero(d, d);
  for (const auto& term : h.terms()) out += term.coefficient * dense_sum(term.op);
  return out;
}

DenseSpectrum dense_spectrum(const DenseMatrix& h) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

double dense_ground_average(const DenseMatrix& h, const DenseMatrix& a, double deg_tol) {
  const auto s = dense_spectrum(h);
  const double e0 = s.energies[0];
  DenseMatrix p = DenseMatrix::Zero(h.rows(), h.cols());
  int count = 0;
  for (Eigen::Index k = 0; k < s.energies.size(); ++k) {
    if (s.energies[k] - e0 <= deg_tol) {
      p += s.vectors.col(k) * s.vectors.col(k).adjoint();
      ++count;
    }
  }
  return (p * a).trace().real() / count;
}

Amplitudes random_state(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Amplitudes v(static_cast<Eigen::Index>(dim));
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace qep::testing
