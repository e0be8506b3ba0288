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

#include "ptdimer/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ptdimer {

FockBasis::FockBasis(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("FockBasis: n_max must be >= 0");
}

std::size_t FockBasis::index_of(int n1, int n2) const {
  if (!contains(n1, n2)) {
    throw std::out_of_range("FockBasis: state |" + std::to_string(n1) + "," +
                            std::to_string(n2) + "> outside basis with n_max=" +
                            std::to_string(n_max_));
  }
  return shell_begin(n1 + n2) + static_cast<std::size_t>(n2);
}

Occupation FockBasis::state(std::size_t k) const {
  if (k >= dim()) throw std::out_of_range("FockBasis: index out of range");
  auto N = static_cast<int>((std::sqrt(8.0 * static_cast<double>(k) + 1.0) - 1.0) / 2.0);
  while (shell_begin(N) > k) --N;
  while (shell_end(N) <= k) ++N;
  const int n2 = static_cast<int>(k - shell_begin(N));
  return {N - n2, n2};
}

FockBasis build_basis(int n_max) { return FockBasis(n_max); }

void check_site(int site) {
  if (site != 1 && site != 2) {
    throw std::invalid_argument("site must be 1 or 2, got " + std::to_string(site));
  }
}

SparseOperator::SparseOperator(std::size_t dim, const std::vector<Triplet>& entries,
                               bool is_hermitian)
    : matrix_(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)),
      hermitian_(is_hermitian) {
  for (const auto& t : entries) {
    if (t.row() < 0 || t.col() < 0 || static_cast<std::size_t>(t.row()) >= dim ||
        static_cast<std::size_t>(t.col()) >= dim) {
      throw std::out_of_range("SparseOperator: entry index out of range");
    }
  }
  // Duplicates are rejected rather than summed.
  matrix_.setFromTriplets(entries.begin(), entries.end(), [](const cplx&, const cplx&) -> cplx {
    throw std::invalid_argument("SparseOperator: duplicate (row, col) entry");
  });
  matrix_.makeCompressed();
  if (hermitian_) {
    SparseMatrixXcd diff = matrix_ - SparseMatrixXcd(matrix_.adjoint());
    for (int k = 0; k < diff.outerSize(); ++k) {
      for (SparseMatrixXcd::InnerIterator it(diff, k); it; ++it) {
        if (it.value() != cplx(0.0)) {
          throw std::invalid_argument("SparseOperator: flagged Hermitian but A != A^dag");
        }
      }
    }
  }
}

SparseOperator::SparseOperator(SparseMatrixXcd matrix, bool is_hermitian)
    : matrix_(std::move(matrix)), hermitian_(is_hermitian) {
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("SparseOperator: matrix must be square");
  }
  matrix_.prune(cplx(0.0));
  matrix_.makeCompressed();
}

std::vector<SparseOperator::Triplet> SparseOperator::entries() const {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(matrix_.nonZeros()));
  for (int k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrixXcd::InnerIterator it(matrix_, k); it; ++it) {
      out.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  return out;
}

cplx SparseOperator::coeff(std::size_t row, std::size_t col) const {
  return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

SparseOperator SparseOperator::adjoint() const {
  return SparseOperator(SparseMatrixXcd(matrix_.adjoint()), hermitian_);
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
  return SparseOperator(SparseMatrixXcd(a.matrix() * b.matrix()), false);
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
  return SparseOperator(SparseMatrixXcd(a.matrix() + b.matrix()),
                        a.is_hermitian() && b.is_hermitian());
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimension mismatch");
  return SparseOperator(SparseMatrixXcd(a.matrix() - b.matrix()),
                        a.is_hermitian() && b.is_hermitian());
}

SparseOperator operator*(cplx s, const SparseOperator& a) {
  return SparseOperator(SparseMatrixXcd(s * a.matrix()),
                        a.is_hermitian() && s.imag() == 0.0);
}

SparseOperator annihilation(const FockBasis& basis, int site) {
  check_site(site);
  std::vector<SparseOperator::Triplet> entries;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto [n1, n2] = basis.state(k);
    const int n = site == 1 ? n1 : n2;
    if (n == 0) continue;
    const std::size_t target = site == 1 ? basis.index_of(n1 - 1, n2) : basis.index_of(n1, n2 - 1);
    entries.emplace_back(static_cast<int>(target), static_cast<int>(k),
                         cplx(std::sqrt(static_cast<double>(n)), 0.0));
  }
  return SparseOperator(basis.dim(), entries, false);
}

SparseOperator creation(const FockBasis& basis, int site) {
  check_site(site);
  std::vector<SparseOperator::Triplet> entries;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto [n1, n2] = basis.state(k);
    if (n1 + n2 == basis.n_max()) continue;  // dropped at the cutoff
    const int n = site == 1 ? n1 : n2;
    const std::size_t target = site == 1 ? basis.index_of(n1 + 1, n2) : basis.index_of(n1, n2 + 1);
    entries.emplace_back(static_cast<int>(target), static_cast<int>(k),
                         cplx(std::sqrt(static_cast<double>(n + 1)), 0.0));
  }
  return SparseOperator(basis.dim(), entries, false);
}

SparseOperator number_operator(const FockBasis& basis, int site) {
  check_site(site);
  std::vector<SparseOperator::Triplet> entries;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto [n1, n2] = basis.state(k);
    const int n = site == 1 ? n1 : n2;
    if (n != 0) entries.emplace_back(static_cast<int>(k), static_cast<int>(k), cplx(n, 0.0));
  }
  return SparseOperator(basis.dim(), entries, true);
}

SparseOperator identity_operator(const FockBasis& basis) {
  std::vector<SparseOperator::Triplet> entries;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    entries.emplace_back(static_cast<int>(k), static_cast<int>(k), cplx(1.0, 0.0));
  }
  return SparseOperator(basis.dim(), entries, true);
}

SparseOperator hamiltonian(const FockBasis& basis, double U, double hopping) {
  std::vector<SparseOperator::Triplet> entries;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto [n1, n2] = basis.state(k);
    const double onsite = 0.5 * U * (n1 * (n1 - 1.0) + n2 * (n2 - 1.0));
    if (onsite != 0.0) {
      entries.emplace_back(static_cast<int>(k), static_cast<int>(k), cplx(onsite, 0.0));
    }
    if (hopping == 0.0) continue;
    // a1^dag a2 |n1,n2> = sqrt((n1+1) n2) |n1+1,n2-1>, plus the mirror element.
    if (n2 > 0) {
      const auto target = basis.index_of(n1 + 1, n2 - 1);
      const double v = -hopping * std::sqrt((n1 + 1.0) * n2);
      entries.emplace_back(static_cast<int>(target), static_cast<int>(k), cplx(v, 0.0));
    }
    if (n1 > 0) {
      const auto target = basis.index_of(n1 - 1, n2 + 1);
      const double v = -hopping * std::sqrt(n1 * (n2 + 1.0));
      entries.emplace_back(static_cast<int>(target), static_cast<int>(k), cplx(v, 0.0));
    }
  }
  return SparseOperator(basis.dim(), entries, true);
}

void apply_window(const SparseOperator& op, const Eigen::Ref<const Eigen::VectorXcd>& x,
                  std::size_t x_offset, Eigen::Ref<Eigen::VectorXcd> y, std::size_t y_offset) {
  const auto& m = op.matrix();
  const auto x_begin = static_cast<Eigen::Index>(x_offset);
  const auto x_end = x_begin + x.size();
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    cplx acc(0.0);
    for (SparseMatrixXcd::InnerIterator it(m, static_cast<Eigen::Index>(y_offset) + i); it; ++it) {
      const auto c = it.col();
      if (c >= x_begin && c < x_end) acc += it.value() * x[c - x_begin];
    }
    y[i] = acc;
  }
}

}  // namespace ptdimer
