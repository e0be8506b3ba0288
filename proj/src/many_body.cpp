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

#include "ptdimer/many_body.hpp"

#include <stdexcept>

namespace ptdimer {

ManyBodyState::ManyBodyState(FockBasis b, Eigen::VectorXcd amps)
    : basis(b), amplitudes(std::move(amps)) {
  if (static_cast<std::size_t>(amplitudes.size()) != basis.dim()) {
    throw std::invalid_argument("ManyBodyState: amplitude length does not match basis");
  }
}

ManyBodyState ManyBodyState::fock(const FockBasis& basis, int n1, int n2) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
  v[static_cast<Eigen::Index>(basis.index_of(n1, n2))] = 1.0;
  return {basis, std::move(v)};
}

ManyBodyState ManyBodyState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("ManyBodyState: cannot normalize zero vector");
  return {basis, amplitudes / n};
}

DensityMatrix::DensityMatrix(FockBasis b, Eigen::MatrixXcd r) : basis(b), rho(std::move(r)) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("DensityMatrix: matrix shape does not match basis");
  }
}

DensityMatrix DensityMatrix::pure(const ManyBodyState& psi) {
  return {psi.basis, psi.amplitudes * psi.amplitudes.adjoint()};
}

double DensityMatrix::top_shell_population() const {
  const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(basis.n_max()));
  const auto e = static_cast<Eigen::Index>(FockBasis::shell_end(basis.n_max()));
  double p = 0.0;
  for (Eigen::Index k = b; k < e; ++k) p += rho(k, k).real();
  return p;
}

double DensityMatrix::hermiticity_error() const {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double top_shell_population(const ManyBodyState& psi) {
  const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(psi.basis.n_max()));
  return psi.amplitudes.tail(psi.amplitudes.size() - b).squaredNorm();
}

}  // namespace ptdimer
