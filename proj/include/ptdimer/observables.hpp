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

#include <array>

#include <Eigen/Dense>

#include "ptdimer/fock.hpp"
#include "ptdimer/many_body.hpp"
#include "ptdimer/meanfield.hpp"

namespace ptdimer {

struct Populations {
  double n1 = 0.0;
  double n2 = 0.0;
  double N = 0.0;
};

Populations site_populations(const ManyBodyState& psi);
Populations site_populations(const DensityMatrix& rho);

/// Single-particle density matrix sigma_jk = <a_j^dag a_k>.
struct SinglePartDM {
  Eigen::Matrix2cd sigma = Eigen::Matrix2cd::Zero();

  double total() const { return sigma.trace().real(); }
};

SinglePartDM single_particle_dm(const ManyBodyState& psi);
SinglePartDM single_particle_dm(const DensityMatrix& rho);

/// Single-particle density matrix of a shell-compressed pure state: x holds
/// the amplitudes of basis indices [offset, offset + x.size()).  Not
/// normalized.
SinglePartDM single_particle_dm(const FockBasis& basis,
                                const Eigen::Ref<const Eigen::VectorXcd>& x, std::size_t offset);

/// Mean-field single-particle density matrix N0 c_j^* c_k.
SinglePartDM single_particle_dm(const ModeAmplitudes& c, int N0);

/// a_j^dag a_k as a sparse operator.
SparseOperator pair_operator(const FockBasis& basis, int j, int k);

/// Delta_jklm = <a_j^dag a_k a_l^dag a_m> - <a_j^dag a_k><a_l^dag a_m>.
cplx covariances(const ManyBodyState& psi, int j, int k, int l, int m);
cplx covariances(const DensityMatrix& rho, int j, int k, int l, int m);

/// Bloch-sphere frame built from the stationary excited state.
///
/// e1 is the excited state (north pole) and e2 = i(-c2^*|1> + c1^*|2>) the
/// PT-symmetric orthogonal complement (south pole).  sigma[0..2] hold the
/// site-basis matrices of sigma_x, sigma_y, sigma_z.
struct BlochFrame {
  ModeAmplitudes e1;
  ModeAmplitudes e2;
  std::array<Eigen::Matrix2cd, 3> sigma;
};

/// Frame for an arbitrary normalized north-pole state c.
BlochFrame bloch_frame_from(const ModeAmplitudes& c);

/// Frame of the dimer at (g, gamma); requires |gamma| < 2.
BlochFrame bloch_frame(double g, double gamma);

struct BlochSample {
  double t = 0.0;
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double N_mean = 0.0;
  /// b rescaled to length N_mean; zero when b vanishes.
  Eigen::Vector3d normalized_b = Eigen::Vector3d::Zero();
  /// False when |b| = 0 and the normalization is undefined.
  bool valid = true;
};

/// b_alpha = sum_ij (sigma_alpha)_ij sigma_ij, i.e. tr(sigma_alpha sigma^T).
Eigen::Vector3d bloch_components(const SinglePartDM& spdm, const BlochFrame& frame);

/// Collective pseudo-spin operator Sigma_alpha = sum_ij <i|sigma_alpha|j> a_i^dag a_j.
SparseOperator collective_spin(const FockBasis& basis, const BlochFrame& frame, int alpha);

BlochSample make_bloch_sample(const Eigen::Vector3d& b, double N_mean, double t = 0.0);

BlochSample bloch_vector(const SinglePartDM& spdm, const BlochFrame& frame, double t = 0.0);
BlochSample bloch_vector(const ManyBodyState& psi, const BlochFrame& frame, double t = 0.0);
BlochSample bloch_vector(const DensityMatrix& rho, const BlochFrame& frame, double t = 0.0);

/// Bloch vector of the mean-field state: the single-particle matrix is
/// N0 c_j^* c_k with the current (unnormalized) c, so |b| = N0 |c|^2.
BlochSample bloch_vector_mf(const ModeAmplitudes& c, int N0, const BlochFrame& frame,
                            double t = 0.0);

}  // namespace ptdimer
