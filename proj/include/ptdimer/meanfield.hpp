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

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ptdimer/rk4.hpp"

namespace ptdimer {

/// Site amplitudes (c1, c2) of the two-mode condensate.
template <typename Real>
using Amplitudes = Eigen::Matrix<std::complex<Real>, 2, 1>;

using ModeAmplitudes = Amplitudes<double>;

/// Time derivative of the discrete PT-symmetric Gross-Pitaevskii equation
///   i dc1/dt = -c2 + g|c1|^2 c1 - i(gamma/2) c1
///   i dc2/dt = -c1 + g|c2|^2 c2 + i(gamma/2) c2
template <typename Real>
Amplitudes<Real> gpe_rhs(const Amplitudes<Real>& c, Real g, Real gamma) {
  using C = std::complex<Real>;
  const C i(0, 1);
  const Real half = gamma / Real(2);
  Amplitudes<Real> d;
  d[0] = i * c[1] - i * g * std::norm(c[0]) * c[0] - half * c[0];
  d[1] = i * c[0] - i * g * std::norm(c[1]) * c[1] + half * c[1];
  return d;
}

/// d/dt (|c1|^2 + |c2|^2) implied by gpe_rhs.
template <typename Real>
Real gpe_norm_rate(const Amplitudes<Real>& c, Real gamma) {
  return gamma * (std::norm(c[1]) - std::norm(c[0]));
}

template <typename Real>
Real squared_norm(const Amplitudes<Real>& c) {
  return c.squaredNorm();
}

template <typename Real>
struct GpeTrajectory {
  std::vector<Real> t;
  std::vector<Amplitudes<Real>> states;
  bool diverged = false;
  /// Time of the last finite step before the norm overflowed.
  Real divergence_time = Real(0);
};

/// RK4 integration of the GPE sampled on t_grid (starting at 0).  The run
/// stops early, with diverged set, once |c|^2 exceeds overflow_norm or stops
/// being finite; states then holds only the grid points reached.
template <typename Real>
GpeTrajectory<Real> integrate_gpe(const Amplitudes<Real>& c0, Real g, Real gamma,
                                  const std::vector<Real>& t_grid, Real dt = Real(1e-3),
                                  Real overflow_norm = Real(1e12)) {
  if (t_grid.empty() || t_grid.front() != Real(0)) {
    throw std::invalid_argument("integrate_gpe: time grid must start at 0");
  }
  if (!(dt > Real(0))) throw std::invalid_argument("integrate_gpe: dt must be > 0");
  GpeTrajectory<Real> out;
  Amplitudes<Real> c = c0;
  Rk4<Amplitudes<Real>> rk4;
  auto f = [g, gamma](const Amplitudes<Real>& y, Amplitudes<Real>& dy) {
    dy = gpe_rhs<Real>(y, g, gamma);
  };
  out.t.push_back(t_grid.front());
  out.states.push_back(c);
  Real t = t_grid.front();
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const Real span = t_grid[k] - t_grid[k - 1];
    if (!(span > Real(0))) throw std::invalid_argument("integrate_gpe: grid must increase");
    const int n = std::max(1, static_cast<int>(std::ceil(span / dt - Real(1e-9))));
    const Real h = span / n;
    for (int s = 0; s < n; ++s) {
      rk4.step(c, h, f);
      const Real nrm = c.squaredNorm();
      if (!std::isfinite(nrm) || nrm > overflow_norm) {
        out.diverged = true;
        out.divergence_time = t;
        return out;
      }
      t = t_grid[k - 1] + (s + 1) * h;
    }
    t = t_grid[k];
    out.t.push_back(t);
    out.states.push_back(c);
  }
  return out;
}

/// Ground and excited PT-symmetric stationary states.
template <typename Real>
struct StationaryPair {
  Amplitudes<Real> ground;
  Amplitudes<Real> excited;
  Real mu_ground;
  Real mu_excited;
};

/// Closed-form stationary states for |gamma| <= 2.
///
/// Both states have |c1| = |c2| = 1/sqrt(2) and c = (e^{-i d/2}, e^{+i d/2})/sqrt(2)
/// with sin d = -gamma/2.  The ground state takes d = -asin(gamma/2) and the
/// excited state d = pi + asin(gamma/2); both branches are continuous in
/// gamma and meet (up to a sign) at the exceptional point gamma = 2.
template <typename Real>
StationaryPair<Real> stationary_states(Real g, Real gamma) {
  if (!(std::abs(gamma) <= Real(2))) {
    throw std::domain_error("stationary_states: no PT-symmetric state for |gamma| > 2");
  }
  const Real a = std::asin(gamma / Real(2));
  const Real root = std::sqrt(std::max(Real(0), Real(1) - gamma * gamma / Real(4)));
  const Real inv_sqrt2 = Real(1) / std::sqrt(Real(2));
  auto make = [inv_sqrt2](Real d) {
    Amplitudes<Real> c;
    c[0] = std::polar(inv_sqrt2, -d / Real(2));
    c[1] = std::polar(inv_sqrt2, d / Real(2));
    return c;
  };
  StationaryPair<Real> out;
  out.ground = make(-a);
  out.excited = make(std::numbers::pi_v<Real> + a);
  out.mu_ground = g / Real(2) - root;
  out.mu_excited = g / Real(2) + root;
  return out;
}

enum class Branch { SymmetricPlus, SymmetricMinus, BrokenPlus, BrokenMinus };

constexpr std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::SymmetricPlus: return "symmetric+";
    case Branch::SymmetricMinus: return "symmetric-";
    case Branch::BrokenPlus: return "broken+";
    case Branch::BrokenMinus: return "broken-";
  }
  return "";
}

template <typename Real>
struct SpectrumPoint {
  Real gamma;
  Branch branch;
  std::complex<Real> mu;
};

/// Chemical potentials of the stationary GPE on a gamma grid.
///
///   PT symmetric, |gamma| <= 2:            mu = g/2 +- sqrt(1 - (gamma/2)^2)
///   PT broken, |gamma| >= sqrt(4 - g^2):   mu = g +- i gamma sqrt(1/4 - 1/(g^2 + gamma^2))
template <typename Real>
std::vector<SpectrumPoint<Real>> spectrum(Real g, const std::vector<Real>& gamma_grid) {
  using C = std::complex<Real>;
  std::vector<SpectrumPoint<Real>> out;
  for (const Real gamma : gamma_grid) {
    if (std::abs(gamma) <= Real(2)) {
      const Real root = std::sqrt(Real(1) - gamma * gamma / Real(4));
      out.push_back({gamma, Branch::SymmetricPlus, C(g / Real(2) + root, Real(0))});
      out.push_back({gamma, Branch::SymmetricMinus, C(g / Real(2) - root, Real(0))});
    }
    const Real r2 = g * g + gamma * gamma;
    if (r2 >= Real(4)) {
      const Real im = gamma * std::sqrt(std::max(Real(0), Real(0.25) - Real(1) / r2));
      out.push_back({gamma, Branch::BrokenPlus, C(g, im)});
      out.push_back({gamma, Branch::BrokenMinus, C(g, -im)});
    }
  }
  return out;
}

/// Macroscopic interaction g = (N0 - 1) U.
inline double macroscopic_g(double U, int N0) {
  if (N0 < 1) throw std::invalid_argument("macroscopic_g: N0 must be >= 1");
  return (N0 - 1) * U;
}

/// Inverse of macroscopic_g.  For N0 = 1 only g = 0 is representable.
inline double interaction_from_g(double g, int N0) {
  if (N0 < 1) throw std::invalid_argument("interaction_from_g: N0 must be >= 1");
  if (N0 == 1) {
    if (g != 0.0) throw std::invalid_argument("interaction_from_g: g != 0 needs N0 > 1");
    return 0.0;
  }
  return g / (N0 - 1);
}

}  // namespace ptdimer
