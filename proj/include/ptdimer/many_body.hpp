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

#include <Eigen/Dense>

#include "ptdimer/fock.hpp"

namespace ptdimer {

/// Pure many-body state: amplitudes over a FockBasis.
struct ManyBodyState {
  FockBasis basis;
  Eigen::VectorXcd amplitudes;

  ManyBodyState() = default;
  ManyBodyState(FockBasis b, Eigen::VectorXcd amps);

  static ManyBodyState fock(const FockBasis& basis, int n1, int n2);

  double norm() const { return amplitudes.norm(); }
  ManyBodyState normalized() const;
};

/// Hermitian density matrix over a FockBasis.
struct DensityMatrix {
  FockBasis basis;
  Eigen::MatrixXcd rho;

  DensityMatrix() = default;
  DensityMatrix(FockBasis b, Eigen::MatrixXcd r);

  static DensityMatrix pure(const ManyBodyState& psi);

  cplx trace() const { return rho.trace(); }
  /// Probability carried by the top shell N = n_max.
  double top_shell_population() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
};

/// Probability on the top shell of a pure state.
double top_shell_population(const ManyBodyState& psi);

}  // namespace ptdimer
