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

#include "ptdimer/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "ptdimer/lindblad.hpp"

namespace ptdimer {

Populations site_populations(const ManyBodyState& psi) {
  const auto s = single_particle_dm(psi);
  return {s.sigma(0, 0).real(), s.sigma(1, 1).real(), s.total()};
}

Populations site_populations(const DensityMatrix& rho) {
  const auto s = single_particle_dm(rho);
  return {s.sigma(0, 0).real(), s.sigma(1, 1).real(), s.total()};
}

SinglePartDM single_particle_dm(const FockBasis& basis,
                                const Eigen::Ref<const Eigen::VectorXcd>& x, std::size_t offset) {
  double s11 = 0.0;
  double s22 = 0.0;
  cplx s12(0.0);
  const auto n = static_cast<std::size_t>(x.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = offset + i;
    const auto [n1, n2] = basis.state(k);
    const cplx a = x[static_cast<Eigen::Index>(i)];
    const double p = std::norm(a);
    s11 += n1 * p;
    s22 += n2 * p;
    // a1^dag a2 |n1,n2> = sqrt((n1+1) n2) |n1+1,n2-1>, which sits at index k-1.
    if (n2 > 0) {
      s12 += std::conj(x[static_cast<Eigen::Index>(i - 1)]) * std::sqrt((n1 + 1.0) * n2) * a;
    }
  }
  SinglePartDM out;
  out.sigma << cplx(s11, 0.0), s12, std::conj(s12), cplx(s22, 0.0);
  return out;
}

SinglePartDM single_particle_dm(const ManyBodyState& psi) {
  return single_particle_dm(psi.basis, psi.amplitudes, 0);
}

SinglePartDM single_particle_dm(const DensityMatrix& rho) {
  double s11 = 0.0;
  double s22 = 0.0;
  cplx s12(0.0);
  for (std::size_t k = 0; k < rho.basis.dim(); ++k) {
    const auto [n1, n2] = rho.basis.state(k);
    const auto kk = static_cast<Eigen::Index>(k);
    s11 += n1 * rho.rho(kk, kk).real();
    s22 += n2 * rho.rho(kk, kk).real();
    // tr(a1^dag a2 rho) = sum_k sqrt((n1+1) n2) rho(k, k-1).
    if (n2 > 0) s12 += std::sqrt((n1 + 1.0) * n2) * rho.rho(kk, kk - 1);
  }
  SinglePartDM out;
  out.sigma << cplx(s11, 0.0), s12, std::conj(s12), cplx(s22, 0.0);
  return out;
}

SinglePartDM single_particle_dm(const ModeAmplitudes& c, int N0) {
  SinglePartDM out;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) out.sigma(j, k) = static_cast<double>(N0) * std::conj(c[j]) * c[k];
  }
  return out;
}

SparseOperator pair_operator(const FockBasis& basis, int j, int k) {
  return creation(basis, j) * annihilation(basis, k);
}

cplx covariances(const ManyBodyState& psi, int j, int k, int l, int m) {
  const auto jk = pair_operator(psi.basis, j, k);
  const auto lm = pair_operator(psi.basis, l, m);
  const Eigen::VectorXcd lm_psi = lm.matrix() * psi.amplitudes;
  const cplx joint = psi.amplitudes.dot(jk.matrix() * lm_psi);
  return joint - psi.amplitudes.dot(jk.matrix() * psi.amplitudes) * psi.amplitudes.dot(lm_psi);
}

cplx covariances(const DensityMatrix& rho, int j, int k, int l, int m) {
  const auto jk = pair_operator(rho.basis, j, k);
  const auto lm = pair_operator(rho.basis, l, m);
  return expectation(rho, jk * lm) - expectation(rho, jk) * expectation(rho, lm);
}

BlochFrame bloch_frame_from(const ModeAmplitudes& c) {
  const cplx i(0.0, 1.0);
  const cplx c1 = c[0];
  const cplx c2 = c[1];
  BlochFrame f;
  f.e1 = c;
  f.e2 << -i * std::conj(c2), i * std::conj(c1);
  const cplx p = c1 * c2;
  f.sigma[0] << -2.0 * p.imag(), -i * (c1 * c1 + std::conj(c2) * std::conj(c2)),
      i * (std::conj(c1) * std::conj(c1) + c2 * c2), 2.0 * p.imag();
  f.sigma[1] << 2.0 * p.real(), -c1 * c1 + std::conj(c2) * std::conj(c2),
      -std::conj(c1) * std::conj(c1) + c2 * c2, -2.0 * p.real();
  f.sigma[2] << std::norm(c1) - std::norm(c2), 2.0 * c1 * std::conj(c2),
      2.0 * std::conj(c1) * c2, std::norm(c2) - std::norm(c1);
  return f;
}

BlochFrame bloch_frame(double g, double gamma) {
  if (!(std::abs(gamma) < 2.0)) {
    throw std::domain_error("bloch_frame: needs |gamma| < 2 for a stationary excited state");
  }
  return bloch_frame_from(stationary_states(g, gamma).excited);
}

Eigen::Vector3d bloch_components(const SinglePartDM& spdm, const BlochFrame& frame) {
  Eigen::Vector3d b;
  for (int a = 0; a < 3; ++a) {
    b[a] = frame.sigma[static_cast<std::size_t>(a)].cwiseProduct(spdm.sigma).sum().real();
  }
  return b;
}

SparseOperator collective_spin(const FockBasis& basis, const BlochFrame& frame, int alpha) {
  if (alpha < 0 || alpha > 2) throw std::invalid_argument("collective_spin: alpha in {0,1,2}");
  const auto& s = frame.sigma[static_cast<std::size_t>(alpha)];
  SparseMatrixXcd acc(static_cast<Eigen::Index>(basis.dim()),
                      static_cast<Eigen::Index>(basis.dim()));
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) acc += s(i - 1, j - 1) * pair_operator(basis, i, j).matrix();
  }
  return SparseOperator(std::move(acc), false);
}

BlochSample make_bloch_sample(const Eigen::Vector3d& b, double N_mean, double t) {
  BlochSample s;
  s.t = t;
  s.b = b;
  s.N_mean = N_mean;
  const double len = b.norm();
  if (len > 0.0) {
    s.normalized_b = b * (N_mean / len);
  } else {
    s.valid = false;
  }
  return s;
}

BlochSample bloch_vector(const SinglePartDM& spdm, const BlochFrame& frame, double t) {
  return make_bloch_sample(bloch_components(spdm, frame), spdm.total(), t);
}

BlochSample bloch_vector(const ManyBodyState& psi, const BlochFrame& frame, double t) {
  return bloch_vector(single_particle_dm(psi), frame, t);
}

BlochSample bloch_vector(const DensityMatrix& rho, const BlochFrame& frame, double t) {
  return bloch_vector(single_particle_dm(rho), frame, t);
}

BlochSample bloch_vector_mf(const ModeAmplitudes& c, int N0, const BlochFrame& frame, double t) {
  return bloch_vector(single_particle_dm(c, N0), frame, t);
}

}  // namespace ptdimer
