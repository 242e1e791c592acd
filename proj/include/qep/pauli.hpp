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

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qep {

using cplx = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(PauliLetter letter);
PauliLetter letter_from_char(char c);

/// Tensor product of single-site Pauli matrices on `n_sites` qubits.
///
/// Site 0 is the most significant bit of a computational basis index, so on
/// three sites the basis state |abc> has index 4a + 2b + c.  Acting on a basis
/// column j the string produces phase(j) |j ^ flip_mask()>.
class PauliString {
 public:
  explicit PauliString(std::vector<PauliLetter> letters);

  /// Parses a letter sequence such as "ZXZ" or "IXYZ" (case-insensitive).
  static PauliString parse(std::string_view text);
  static PauliString identity(int n_sites);
  /// Identity everywhere except the listed (site, letter) pairs.
  static PauliString on_sites(
      int n_sites, std::initializer_list<std::pair<int, PauliLetter>> ops);
  static PauliString on_sites(
      int n_sites, std::span<const std::pair<int, PauliLetter>> ops);

  int n_sites() const { return static_cast<int>(letters_.size()); }
  std::size_t dim() const { return std::size_t{1} << letters_.size(); }
  PauliLetter operator[](int site) const { return letters_.at(site); }
  std::span<const PauliLetter> letters() const { return letters_; }
  std::string str() const;
  bool is_identity() const { return flip_mask_ == 0 && phase_mask_ == 0; }

  std::uint64_t flip_mask() const { return flip_mask_; }
  cplx phase(std::uint64_t column) const;

  /// out += coeff * P * in.
  void apply_add(cplx coeff, const Amplitudes& in, Amplitudes& out) const;
  /// <psi|P|psi> without normalisation; real because P is Hermitian.
  double expectation(const Amplitudes& psi) const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.letters_ == b.letters_;
  }
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  std::uint64_t bit(int site) const {
    return std::uint64_t{1} << (letters_.size() - 1 - site);
  }

  std::vector<PauliLetter> letters_;
  std::uint64_t flip_mask_ = 0;   // X or Y
  std::uint64_t phase_mask_ = 0;  // Y or Z
  int n_y_ = 0;
};

/// Unit-norm vector on a 2^n dimensional Hilbert space.
class StateVector {
 public:
  /// Normalises `amplitudes`; throws std::invalid_argument on a zero vector.
  static StateVector normalized(Amplitudes amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  const Amplitudes& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  cplx operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

 private:
  explicit StateVector(Amplitudes a) : amplitudes_(std::move(a)) {}
  Amplitudes amplitudes_;
};

/// Square complex sparse matrix (CSR) of power-of-two dimension.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  explicit SparseOperator(Matrix m);
  static SparseOperator zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Amplitudes apply(const Amplitudes& v) const;
  bool is_hermitian(double tol = 1e-12) const;
  Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(m_); }

  SparseOperator operator+(const SparseOperator& other) const;
  SparseOperator operator*(double s) const;

 private:
  Matrix m_;
};

SparseOperator realize(const PauliString& p);

/// <psi|op|psi>.  Throws std::invalid_argument on dimension mismatch and
/// std::domain_error if the imaginary part exceeds 1e-10.
double expectation(const SparseOperator& op, const StateVector& psi);

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
};

/// Real linear combination of Pauli strings on a fixed number of sites.
/// Identical strings are merged on insertion, so the term list is unique.
class PauliSum {
 public:
  explicit PauliSum(int n_sites) : n_sites_(n_sites) {}
  PauliSum(double coefficient, PauliString string);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return std::size_t{1} << n_sites_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  PauliSum& add(double coefficient, const PauliString& string);
  PauliSum& operator+=(const PauliSum& other);
  PauliSum operator*(double s) const;

  /// out += coeff * A * in.
  void apply_add(double coeff, const Amplitudes& in, Amplitudes& out) const;
  Amplitudes apply(const Amplitudes& in) const;
  double expectation(const Amplitudes& psi) const;
  double expectation(const StateVector& psi) const { return expectation(psi.amplitudes()); }
  /// <psi|A^2|psi>.
  double second_moment(const Amplitudes& psi) const;

 private:
  int n_sites_;
  std::vector<PauliTerm> terms_;
};

inline PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }

SparseOperator realize(const PauliSum& sum);

}  // namespace qep
