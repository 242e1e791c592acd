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

#include "qep/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qep {

char to_char(PauliLetter letter) {
  switch (letter) {
    case PauliLetter::I: return 'I';
    case PauliLetter::X: return 'X';
    case PauliLetter::Y: return 'Y';
    case PauliLetter::Z: return 'Z';
  }
  return '?';
}

PauliLetter letter_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return PauliLetter::I;
    case 'X': case 'x': return PauliLetter::X;
    case 'Y': case 'y': return PauliLetter::Y;
    case 'Z': case 'z': return PauliLetter::Z;
    default: break;
  }
  throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
}

PauliString::PauliString(std::vector<PauliLetter> letters)
    : letters_(std::move(letters)) {
  if (letters_.empty()) {
    throw std::invalid_argument("PauliString needs at least one site");
  }
  if (letters_.size() > 62) {
    throw std::invalid_argument("PauliString supports at most 62 sites");
  }
  for (int s = 0; s < n_sites(); ++s) {
    switch (letters_[s]) {
      case PauliLetter::I: break;
      case PauliLetter::X: flip_mask_ |= bit(s); break;
      case PauliLetter::Y:
        flip_mask_ |= bit(s);
        phase_mask_ |= bit(s);
        ++n_y_;
        break;
      case PauliLetter::Z: phase_mask_ |= bit(s); break;
    }
  }
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<PauliLetter> letters;
  letters.reserve(text.size());
  for (char c : text) letters.push_back(letter_from_char(c));
  return PauliString(std::move(letters));
}

PauliString PauliString::identity(int n_sites) {
  if (n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  return PauliString(std::vector<PauliLetter>(n_sites, PauliLetter::I));
}

PauliString PauliString::on_sites(
    int n_sites, std::initializer_list<std::pair<int, PauliLetter>> ops) {
  return on_sites(n_sites, std::span<const std::pair<int, PauliLetter>>(
                               ops.begin(), ops.size()));
}

PauliString PauliString::on_sites(
    int n_sites, std::span<const std::pair<int, PauliLetter>> ops) {
  if (n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  std::vector<PauliLetter> letters(n_sites, PauliLetter::I);
  for (const auto& [site, letter] : ops) {
    if (site < 0 || site >= n_sites) {
      throw std::out_of_range("site " + std::to_string(site) +
                              " outside chain of " + std::to_string(n_sites));
    }
    if (letters[site] != PauliLetter::I) {
      throw std::invalid_argument("site " + std::to_string(site) +
                                  " assigned twice");
    }
    letters[site] = letter;
  }
  return PauliString(std::move(letters));
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(letters_.size());
  for (auto l : letters_) s.push_back(to_char(l));
  return s;
}

cplx PauliString::phase(std::uint64_t column) const {
  // Y|0> = i|1>, Y|1> = -i|0>, Z|b> = (-1)^b |b>.
  static constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = kIPow[n_y_ & 3];
  return (std::popcount(column & phase_mask_) & 1) ? -base : base;
}

void PauliString::apply_add(cplx coeff, const Amplitudes& in,
                            Amplitudes& out) const {
  const auto n = static_cast<std::uint64_t>(in.size());
  for (std::uint64_t j = 0; j < n; ++j) {
    out[static_cast<Eigen::Index>(j ^ flip_mask_)] +=
        coeff * phase(j) * in[static_cast<Eigen::Index>(j)];
  }
}

double PauliString::expectation(const Amplitudes& psi) const {
  const auto n = static_cast<std::uint64_t>(psi.size());
  if (n != dim()) {
    throw std::invalid_argument("state dimension does not match Pauli string");
  }
  cplx acc = 0.0;
  for (std::uint64_t j = 0; j < n; ++j) {
    acc += std::conj(psi[static_cast<Eigen::Index>(j ^ flip_mask_)]) *
           phase(j) * psi[static_cast<Eigen::Index>(j)];
  }
  return acc.real();
}

StateVector StateVector::normalized(Amplitudes amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("cannot normalise a zero or non-finite vector");
  }
  amplitudes /= norm;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::out_of_range("basis index out of range");
  Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(dim));
  a[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(a));
}

SparseOperator::SparseOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("SparseOperator must be square");
  }
  if (m_.rows() < 1 || !std::has_single_bit(static_cast<std::uint64_t>(m_.rows()))) {
    throw std::invalid_argument("SparseOperator dimension must be a power of two");
  }
  m_.makeCompressed();
}

SparseOperator SparseOperator::zero(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return SparseOperator(Matrix(d, d));
}

Amplitudes SparseOperator::apply(const Amplitudes& v) const {
  if (v.size() != m_.cols()) {
    throw std::invalid_argument("operator/vector dimension mismatch");
  }
  return m_ * v;
}

bool SparseOperator::is_hermitian(double tol) const {
  const Matrix diff = m_ - Matrix(m_.adjoint());
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
    for (Matrix::InnerIterator it(diff, k); it; ++it) {
      if (std::abs(it.value()) > tol) return false;
    }
  }
  return true;
}

SparseOperator SparseOperator::operator+(const SparseOperator& other) const {
  if (other.dim() != dim()) {
    throw std::invalid_argument("operator dimension mismatch");
  }
  return SparseOperator(Matrix(m_ + other.m_));
}

SparseOperator SparseOperator::operator*(double s) const {
  return SparseOperator(Matrix(m_ * cplx(s, 0.0)));
}

namespace {

// A Pauli sum collapses to one masked diagonal per distinct flip mask.
SparseOperator assemble_terms(int n_sites, const std::vector<PauliTerm>& terms) {
  const std::uint64_t dim = std::uint64_t{1} << n_sites;
  std::vector<std::uint64_t> masks;
  std::vector<Amplitudes> diagonals;
  for (const auto& t : terms) {
    if (t.coefficient == 0.0) continue;
    const auto m = t.string.flip_mask();
    auto it = std::find(masks.begin(), masks.end(), m);
    std::size_t slot = static_cast<std::size_t>(it - masks.begin());
    if (it == masks.end()) {
      masks.push_back(m);
      diagonals.emplace_back(Amplitudes::Zero(static_cast<Eigen::Index>(dim)));
    }
    // Row r holds entry phase(r ^ m) at column r ^ m.
    auto& d = diagonals[slot];
    for (std::uint64_t r = 0; r < dim; ++r) {
      d[static_cast<Eigen::Index>(r)] += t.coefficient * t.string.phase(r ^ m);
    }
  }
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(masks.size() * dim);
  for (std::uint64_t r = 0; r < dim; ++r) {
    for (std::size_t k = 0; k < masks.size(); ++k) {
      const cplx v = diagonals[k][static_cast<Eigen::Index>(r)];
      if (v != cplx(0.0, 0.0)) {
        triplets.emplace_back(static_cast<int>(r), static_cast<int>(r ^ masks[k]), v);
      }
    }
  }
  const auto d = static_cast<Eigen::Index>(dim);
  SparseOperator::Matrix m(d, d);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return SparseOperator(std::move(m));
}

}  // namespace

SparseOperator realize(const PauliString& p) {
  return assemble_terms(p.n_sites(), {PauliTerm{1.0, p}});
}

double expectation(const SparseOperator& op, const StateVector& psi) {
  if (op.dim() != psi.dim()) {
    throw std::invalid_argument("operator/state dimension mismatch");
  }
  const cplx v = psi.amplitudes().dot(op.matrix() * psi.amplitudes());
  if (std::abs(v.imag()) > 1e-10) {
    throw std::domain_error("expectation value has imaginary part; operator not Hermitian");
  }
  return v.real();
}

PauliSum::PauliSum(double coefficient, PauliString string)
    : n_sites_(string.n_sites()) {
  add(coefficient, string);
}

PauliSum& PauliSum::add(double coefficient, const PauliString& string) {
  if (string.n_sites() != n_sites_) {
    throw std::invalid_argument("Pauli string acts on " +
                                std::to_string(string.n_sites()) +
                                " sites, sum on " + std::to_string(n_sites_));
  }
  if (!std::isfinite(coefficient)) {
    throw std::invalid_argument("non-finite Pauli coefficient");
  }
  for (auto& t : terms_) {
    if (t.string == string) {
      t.coefficient += coefficient;
      return *this;
    }
  }
  terms_.push_back({coefficient, string});
  return *this;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  for (const auto& t : other.terms_) add(t.coefficient, t.string);
  return *this;
}

PauliSum PauliSum::operator*(double s) const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coefficient *= s;
  return out;
}

void PauliSum::apply_add(double coeff, const Amplitudes& in, Amplitudes& out) const {
  for (const auto& t : terms_) t.string.apply_add(coeff * t.coefficient, in, out);
}

Amplitudes PauliSum::apply(const Amplitudes& in) const {
  if (static_cast<std::size_t>(in.size()) != dim()) {
    throw std::invalid_argument("state dimension does not match Pauli sum");
  }
  Amplitudes out = Amplitudes::Zero(in.size());
  apply_add(1.0, in, out);
  return out;
}

double PauliSum::expectation(const Amplitudes& psi) const {
  if (static_cast<std::size_t>(psi.size()) != dim()) {
    throw std::invalid_argument("state dimension does not match Pauli sum");
  }
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.coefficient * t.string.expectation(psi);
  return acc;
}

double PauliSum::second_moment(const Amplitudes& psi) const {
  return apply(psi).squaredNorm();
}

SparseOperator realize(const PauliSum& sum) {
  return assemble_terms(sum.n_sites(), sum.terms());
}

}  // namespace qep
