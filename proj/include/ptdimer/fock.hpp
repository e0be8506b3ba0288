// Copyright 2026 The ptdimer Authors
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

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace ptdimer {

using cplx = std::complex<double>;
using SparseMatrixXcd = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

/// Occupation numbers (n1, n2) of a two-site Fock state.
struct Occupation {
  int n1 = 0;
  int n2 = 0;

  int total() const { return n1 + n2; }
  friend bool operator==(const Occupation&, const Occupation&) = default;
};

/// Two-site Fock space truncated by total particle number.
///
/// States are ordered by total particle number N and, within a shell, by n1
/// descending: |0,0>, |1,0>, |0,1>, |2,0>, |1,1>, |0,2>, ...  Shell N is the
/// contiguous index range [N(N+1)/2, (N+1)(N+2)/2), so index_of(n1, n2) has
/// the closed form N(N+1)/2 + n2.
class FockBasis {
 public:
  FockBasis() = default;
  explicit FockBasis(int n_max);

  int n_max() const { return n_max_; }
  std::size_t dim() const { return shell_begin(n_max_ + 1); }

  bool contains(int n1, int n2) const {
    return n1 >= 0 && n2 >= 0 && n1 + n2 <= n_max_;
  }

  /// Throws std::out_of_range for states outside the truncated space.
  std::size_t index_of(int n1, int n2) const;
  Occupation state(std::size_t k) const;

  static constexpr std::size_t shell_begin(int N) {
    return static_cast<std::size_t>(N) * static_cast<std::size_t>(N + 1) / 2;
  }
  static constexpr std::size_t shell_end(int N) { return shell_begin(N + 1); }

  friend bool operator==(const FockBasis&, const FockBasis&) = default;

 private:
  int n_max_ = 0;
};

FockBasis build_basis(int n_max);

/// Immutable sparse operator on a FockBasis.
///
/// Entries are stored once per (row, col); operators flagged Hermitian are
/// verified to satisfy A[r,c] == conj(A[c,r]) exactly at construction.
class SparseOperator {
 public:
  using Triplet = Eigen::Triplet<cplx>;

  SparseOperator() = default;
  SparseOperator(std::size_t dim, const std::vector<Triplet>& entries,
                 bool is_hermitian);
  SparseOperator(SparseMatrixXcd matrix, bool is_hermitian);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  bool is_hermitian() const { return hermitian_; }
  const SparseMatrixXcd& matrix() const { return matrix_; }

  std::vector<Triplet> entries() const;
  cplx coeff(std::size_t row, std::size_t col) const;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const { return matrix_ * x; }
  SparseOperator adjoint() const;

 private:
  SparseMatrixXcd matrix_;
  bool hermitian_ = false;
};

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(cplx s, const SparseOperator& a);

/// a_site with site in {1, 2}.
SparseOperator annihilation(const FockBasis& basis, int site);

/// a_site^dagger; matrix elements leaving the basis (N > n_max) are dropped.
SparseOperator creation(const FockBasis& basis, int site);

SparseOperator number_operator(const FockBasis& basis, int site);

SparseOperator identity_operator(const FockBasis& basis);

/// Bose-Hubbard dimer
///   H = -J (a1^dag a2 + a2^dag a1) + (U/2) sum_j a_j^dag a_j^dag a_j a_j
/// with the hopping J = 1 in the dimensionless units used throughout.
/// Passing hopping = 0 decouples the two sites.
SparseOperator hamiltonian(const FockBasis& basis, double U,
                           double hopping = 1.0);

/// Windowed product on a shell-compressed vector.
///
/// x holds the amplitudes on basis indices [x_offset, x_offset + x.size());
/// the result holds rows [y_offset, y_offset + y.size()).  Columns outside
/// the x window are treated as zero.
void apply_window(const SparseOperator& op, const Eigen::Ref<const Eigen::VectorXcd>& x,
                  std::size_t x_offset, Eigen::Ref<Eigen::VectorXcd> y,
                  std::size_t y_offset);

void check_site(int site);

}  // namespace ptdimer
