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

#include "ptdimer/states.hpp"

#include <cmath>
#include <stdexcept>

namespace ptdimer {

namespace {

// |c|^k e^{i k arg c}, with 0^0 = 1.
cplx power(cplx c, int k, double log_abs) {
  if (k == 0) return {1.0, 0.0};
  if (c == cplx(0.0)) return {0.0, 0.0};
  return std::polar(std::exp(k * log_abs), k * std::arg(c));
}

}  // namespace

ManyBodyState embed_mean_field(const ModeAmplitudes& c, int N0, const FockBasis& basis) {
  if (N0 < 0) throw std::invalid_argument("embed_mean_field: N0 must be >= 0");
  if (N0 > basis.n_max()) {
    throw std::invalid_argument("embed_mean_field: N0 exceeds the basis cutoff");
  }
  if (std::abs(c.squaredNorm() - 1.0) > 1e-10) {
    throw std::invalid_argument("embed_mean_field: amplitudes must be normalized");
  }
  const double la = std::log(std::abs(c[0]));
  const double lb = std::log(std::abs(c[1]));
  const double lf = std::lgamma(N0 + 1.0);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
  for (int m = 0; m <= N0; ++m) {
    const double log_binom = lf - std::lgamma(m + 1.0) - std::lgamma(N0 - m + 1.0);
    const cplx v = std::exp(0.5 * log_binom) * power(c[0], N0 - m, la) * power(c[1], m, lb);
    amps[static_cast<Eigen::Index>(basis.index_of(N0 - m, m))] = v;
  }
  return {basis, std::move(amps)};
}

ManyBodyState superposition(const ManyBodyState& psi_g, const ManyBodyState& psi_e, double theta) {
  if (!(psi_g.basis == psi_e.basis)) {
    throw std::invalid_argument("superposition: states live in different bases");
  }
  Eigen::VectorXcd v = std::cos(theta) * psi_g.amplitudes + std::sin(theta) * psi_e.amplitudes;
  const double n = v.norm();
  if (n < 1e-8) throw std::invalid_argument("superposition: destructive cancellation");
  return {psi_g.basis, v / n};
}

ModeAmplitudes mean_field_superposition(const ModeAmplitudes& c_g, const ModeAmplitudes& c_e,
                                        double theta) {
  ModeAmplitudes c = std::cos(theta) * c_g + std::sin(theta) * c_e;
  const double n = c.norm();
  if (n < 1e-8) throw std::invalid_argument("mean_field_superposition: destructive cancellation");
  return c / n;
}

ModeAmplitudes great_circle_state(const ModeAmplitudes& e1, const ModeAmplitudes& e2,
                                  double polar) {
  return std::cos(0.5 * polar) * e1 + std::sin(0.5 * polar) * e2;
}

}  // namespace ptdimer
