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

#include "properties.hpp"

#include <algorithm>
#include <cmath>

#include "ptdimer/lindblad.hpp"
#include "ptdimer/observables.hpp"
#include "ptdimer/states.hpp"

namespace ptdimer::testing {

Eigen::VectorXcd random_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(d(rng), d(rng));
  return v;
}

ModeAmplitudes random_mode(Rng& rng) {
  const Eigen::VectorXcd v = random_vector(2, rng).normalized();
  return ModeAmplitudes(v[0], v[1]);
}

ManyBodyState random_state_below(const FockBasis& basis, int n_below, Rng& rng) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
  const auto m = static_cast<Eigen::Index>(FockBasis::shell_begin(n_below));
  v.head(m) = random_vector(m, rng);
  return ManyBodyState(basis, v.normalized());
}

DensityMatrix random_density(const FockBasis& basis, int rank, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (int r = 0; r < rank; ++r) {
    const Eigen::VectorXcd v = random_vector(d, rng);
    rho += v * v.adjoint();
  }
  rho /= rho.trace();
  return DensityMatrix(basis, rho);
}

double fock_algebra_error(int n_max, int trials, Rng& rng) {
  const FockBasis basis(n_max);
  const SparseOperator a[2] = {annihilation(basis, 1), annihilation(basis, 2)};
  const SparseOperator ad[2] = {creation(basis, 1), creation(basis, 2)};
  const SparseOperator n[2] = {number_operator(basis, 1), number_operator(basis, 2)};
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto psi = random_state_below(basis, n_max, rng).amplitudes;
    for (int i = 0; i < 2; ++i) {
      err = std::max(err, (ad[i].apply(a[i].apply(psi)) - n[i].apply(psi)).norm());
      for (int j = 0; j < 2; ++j) {
        const Eigen::VectorXcd c = a[i].apply(ad[j].apply(psi)) - ad[j].apply(a[i].apply(psi));
        const Eigen::VectorXcd expect = i == j ? psi : Eigen::VectorXcd::Zero(psi.size());
        err = std::max(err, (c - expect).norm());
        err = std::max(err, (a[i].apply(a[j].apply(psi)) - a[j].apply(a[i].apply(psi))).norm());
      }
    }
  }
  return err;
}

double hamiltonian_symmetry_error(int n_max, int trials, Rng& rng) {
  const FockBasis basis(n_max);
  const auto Ntot = number_operator(basis, 1) + number_operator(basis, 2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto H = hamiltonian(basis, u(rng), u(rng));
    const SparseMatrixXcd herm = H.matrix() - SparseMatrixXcd(H.matrix().adjoint());
    err = std::max(err, herm.norm());
    const SparseMatrixXcd comm = (H * Ntot).matrix() - (Ntot * H).matrix();
    err = std::max(err, comm.norm());
  }
  return err;
}

namespace {

struct RandomModel {
  SparseOperator H;
  DimerParams params;
};

RandomModel random_model(const FockBasis& basis, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.5);
  RandomModel m;
  m.params.U = u(rng);
  m.params.gamma_loss = u(rng);
  m.params.gamma_gain = u(rng);
  m.params.N0 = 2;
  m.H = hamiltonian(basis, m.params.U);
  return m;
}

}  // namespace

double lindblad_trace_error(int n_max, int trials, Rng& rng) {
  const FockBasis basis(n_max);
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto m = random_model(basis, rng);
    const auto rho = random_density(basis, 3, rng);
    const Liouvillian L(basis, m.H, m.params);
    const cplx tr = L.apply(rho.rho).trace();
    double leak = 0.0;
    for (auto k = FockBasis::shell_begin(n_max); k < basis.dim(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      leak += (basis.state(k).n2 + 1.0) * rho.rho(kk, kk).real();
    }
    err = std::max(err, std::abs(tr + m.params.gamma_gain * leak));
    // Below the top shell the trace is conserved exactly.
    const auto below = DensityMatrix::pure(random_state_below(basis, n_max, rng));
    err = std::max(err, std::abs(L.apply(below.rho).trace()));
  }
  return err;
}

double lindblad_hermiticity_error(int n_max, int trials, Rng& rng) {
  const FockBasis basis(n_max);
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto m = random_model(basis, rng);
    const Eigen::MatrixXcd out = Liouvillian(basis, m.H, m.params).apply(
        random_density(basis, 2, rng).rho);
    err = std::max(err, (out - out.adjoint()).norm());
  }
  return err;
}

double lindblad_linearity_error(int n_max, int trials, Rng& rng) {
  const FockBasis basis(n_max);
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto m = random_model(basis, rng);
    const Liouvillian L(basis, m.H, m.params);
    const auto x = random_density(basis, 2, rng).rho;
    const auto y = random_density(basis, 4, rng).rho;
    const Eigen::VectorXcd ab = random_vector(2, rng);
    const Eigen::MatrixXcd lhs = L.apply(ab[0] * x + ab[1] * y);
    const Eigen::MatrixXcd rhs = ab[0] * L.apply(x) + ab[1] * L.apply(y);
    err = std::max(err, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
  }
  return err;
}

double embedding_error(int N0, int trials, Rng& rng) {
  const FockBasis basis(N0 + 1);
  const auto a1 = annihilation(basis, 1);
  const auto a2 = annihilation(basis, 2);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto c = random_mode(rng);
    const auto psi = embed_mean_field(c, N0, basis);
    err = std::max(err, std::abs(psi.norm() - 1.0));
    const auto s = single_particle_dm(psi).sigma;
    const auto s_mf = single_particle_dm(c, N0).sigma;
    err = std::max(err, (s - s_mf).norm() / N0);
    // a_j embed_N0(c) = sqrt(N0) c_j embed_{N0-1}(c)
    const auto lower = embed_mean_field(c, N0 - 1, basis);
    const double r = std::sqrt(static_cast<double>(N0));
    err = std::max(err, (a1.apply(psi.amplitudes) - r * c[0] * lower.amplitudes).norm() / r);
    err = std::max(err, (a2.apply(psi.amplitudes) - r * c[1] * lower.amplitudes).norm() / r);
    // embed(e^{i phi} c) = e^{i N0 phi} embed(c)
    const double phi = phase(rng);
    const auto rotated = embed_mean_field(ModeAmplitudes(std::polar(1.0, phi) * c), N0, basis);
    err = std::max(err,
                   (rotated.amplitudes - std::polar(1.0, N0 * phi) * psi.amplitudes).norm());
  }
  return err;
}

double pauli_algebra_error(int trials, Rng& rng) {
  const cplx i(0.0, 1.0);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto f = bloch_frame_from(random_mode(rng));
    for (int a = 0; a < 3; ++a) {
      const auto& sa = f.sigma[static_cast<std::size_t>(a)];
      err = std::max(err, (sa - sa.adjoint()).norm());
      err = std::max(err, std::abs(sa.trace()));
      for (int b = 0; b < 3; ++b) {
        const auto& sb = f.sigma[static_cast<std::size_t>(b)];
        Eigen::Matrix2cd expect = a == b ? id : Eigen::Matrix2cd::Zero();
        if (a != b) {
          const int c = 3 - a - b;
          const double eps = ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
          expect = i * eps * f.sigma[static_cast<std::size_t>(c)];
        }
        err = std::max(err, (sa * sb - expect).norm());
      }
    }
    // Poles: e1 up, e2 down.
    const Eigen::Matrix2cd proj1 = f.e1.conjugate() * f.e1.transpose();
    const Eigen::Matrix2cd proj2 = f.e2.conjugate() * f.e2.transpose();
    err = std::max(err, std::abs(f.sigma[2].cwiseProduct(proj1).sum() - 1.0));
    err = std::max(err, std::abs(f.sigma[2].cwiseProduct(proj2).sum() + 1.0));
  }
  return err;
}

double contraction_error(int N0, int trials, Rng& rng) {
  const FockBasis basis(N0);
  const auto frame = bloch_frame_from(random_mode(rng));
  double err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto product = embed_mean_field(random_mode(rng), N0, basis);
    const auto bp = bloch_vector(product, frame);
    err = std::max(err, std::abs(bp.b.norm() - N0) / N0);
    const auto generic = ManyBodyState(basis, random_vector(static_cast<Eigen::Index>(basis.dim()),
                                                            rng).normalized());
    const auto bg = bloch_vector(generic, frame);
    err = std::max(err, std::max(0.0, bg.b.norm() - bg.N_mean));
    const auto mixed = random_density(basis, 3, rng);
    const auto bm = bloch_vector(mixed, frame);
    err = std::max(err, std::max(0.0, bm.b.norm() - bm.N_mean));
  }
  return err;
}

}  // namespace ptdimer::testing
