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

#include <doctest.h>

#include <cmath>

#include "ptdimer/meanfield.hpp"
#include "ptdimer/states.hpp"

using namespace ptdimer;

TEST_CASE("GPE matches a high-order reference integration") {
  // tests/oracles/reference_values.py: DOP853 at rtol 1e-13, c0 = (1, 0), g = 1, gamma = 0.5.
  const ModeAmplitudes c0(1.0, 0.0);
  const auto run = integrate_gpe(c0, 1.0, 0.5, {0.0, 1.0, 3.0});
  REQUIRE(run.states.size() == 3);
  const ModeAmplitudes at1(cplx(0.27412155491335832, -0.23876345188280587),
                           cplx(0.45046567466832982, 0.71467974447701343));
  const ModeAmplitudes at3(cplx(0.7076549419057071, 0.74996929658817069),
                           cplx(0.19375785036745075, -0.25583133417764137));
  CHECK((run.states[1] - at1).norm() < 1e-10);
  CHECK((run.states[2] - at3).norm() < 1e-10);
}

TEST_CASE("norm rate equals gamma (|c2|^2 - |c1|^2)") {
  const ModeAmplitudes c(cplx(0.3, 0.4), cplx(-0.6, 0.2));
  const auto d = gpe_rhs(c, 0.7, 0.9);
  const double rate = 2.0 * (std::conj(c[0]) * d[0] + std::conj(c[1]) * d[1]).real();
  CHECK(rate == doctest::Approx(gpe_norm_rate(c, 0.9)).epsilon(1e-14));
}

TEST_CASE("stationary states solve the nonlinear eigenproblem") {
  for (double g : {0.0, 0.5, 1.0, 2.5}) {
    for (double gamma : {0.0, 0.3, 1.0, 1.7, 2.0}) {
      const auto st = stationary_states(g, gamma);
      // i dc/dt = mu c
      const cplx i(0.0, 1.0);
      CHECK((i * gpe_rhs(st.ground, g, gamma) - st.mu_ground * st.ground).norm() < 1e-13);
      CHECK((i * gpe_rhs(st.excited, g, gamma) - st.mu_excited * st.excited).norm() < 1e-13);
      CHECK(st.ground.norm() == doctest::Approx(1.0));
      CHECK(st.mu_excited >= st.mu_ground);
    }
  }
  CHECK_THROWS_AS(stationary_states(0.5, 2.1), std::domain_error);
}

TEST_CASE("stationary states do not move under the GPE") {
  const auto st = stationary_states(0.5, 0.5);
  const auto run = integrate_gpe(st.excited, 0.5, 0.5, {0.0, 5.0});
  const cplx phase = run.states.back()[0] / st.excited[0];
  CHECK(std::abs(phase) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK((run.states.back() - phase * st.excited).norm() < 1e-10);
}

TEST_CASE("spectrum branches") {
  const auto pts = spectrum(0.5, std::vector<double>{0.0, 1.9, 2.0, 2.5});
  int symmetric = 0, broken = 0;
  for (const auto& p : pts) {
    if (p.branch == Branch::SymmetricPlus || p.branch == Branch::SymmetricMinus) {
      ++symmetric;
      CHECK(p.mu.imag() == 0.0);
      CHECK(p.gamma <= 2.0);
    } else {
      ++broken;
      CHECK(p.gamma * p.gamma + 0.25 >= 4.0);
      CHECK(p.mu.real() == 0.5);
    }
  }
  CHECK(symmetric == 6);
  CHECK(broken == 4);
  // g = 0: both symmetric branches meet at 0 at the exceptional point.
  const auto ep = spectrum(0.0, std::vector<double>{2.0});
  REQUIRE(ep.size() == 4);
  for (const auto& p : ep) CHECK(std::abs(p.mu) < 1e-15);
  // g = 2.5: broken branches already at gamma = 0.
  const auto strong = spectrum(2.5, std::vector<double>{0.0});
  CHECK(strong.size() == 4);
  CHECK(branch_name(Branch::BrokenMinus) == "broken-");
}

TEST_CASE("scalar type is a template parameter") {
  const auto stf = stationary_states<float>(0.5f, 0.5f);
  const auto std_ = stationary_states<double>(0.5, 0.5);
  CHECK(stf.mu_ground == doctest::Approx(std_.mu_ground).epsilon(1e-6));
  const auto run =
      integrate_gpe<long double>(Amplitudes<long double>(1.0L, 0.0L), 1.0L, 0.5L, {0.0L, 1.0L});
  CHECK(static_cast<double>(std::abs(run.states[1][0] - std::complex<long double>(
                                         0.27412155491335832L, -0.23876345188280587L))) < 1e-10);
}

TEST_CASE("superposition dichotomy at g = 1, gamma = 1") {
  const auto st = stationary_states(1.0, 1.0);
  std::vector<double> grid;
  for (int k = 0; k <= 60; ++k) grid.push_back(0.1 * k);
  const auto blow = integrate_gpe(mean_field_superposition(st.ground, st.excited, 1.4), 1.0, 1.0,
                                  grid);
  double cross = -1.0;
  for (std::size_t k = 0; k < blow.states.size(); ++k) {
    if (blow.states[k].squaredNorm() > 5.0) {
      cross = blow.t[k];
      break;
    }
  }
  CHECK(cross > 4.0);
  CHECK(cross < 5.0);
  const auto calm = integrate_gpe(mean_field_superposition(st.ground, st.excited, 0.2), 1.0, 1.0,
                                  grid);
  double peak = 0.0;
  for (const auto& c : calm.states) peak = std::max(peak, c.squaredNorm());
  CHECK(peak < 1.5);
}

TEST_CASE("overflow stops the integration") {
  // Pure gain on site 2 with no coupling path back: norm grows without bound.
  const auto run = integrate_gpe(ModeAmplitudes(0.0, 1.0), 0.0, 40.0, {0.0, 1.0, 2.0}, 1e-3, 1e6);
  CHECK(run.diverged);
  CHECK(run.states.size() < 3);
}

TEST_CASE("interaction conversions") {
  CHECK(macroscopic_g(0.01, 101) == doctest::Approx(1.0));
  CHECK(interaction_from_g(0.5, 51) == doctest::Approx(0.01));
  CHECK_THROWS(interaction_from_g(0.5, 1));
  CHECK(interaction_from_g(0.0, 1) == 0.0);
}
