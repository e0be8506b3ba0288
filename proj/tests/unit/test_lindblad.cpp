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

#include "properties.hpp"
#include "ptdimer/errors.hpp"
#include "ptdimer/lindblad.hpp"
#include "ptdimer/meanfield.hpp"
#include "ptdimer/observables.hpp"
#include "ptdimer/states.hpp"

using namespace ptdimer;

namespace {

struct Reference {
  double t, n1, n2, s12_re, s12_im;
};

// tests/oracles/reference_values.py: superoperator exponential, N0 = 2,
// g = 0.5, gamma = 0.5 balanced, n_max = 8, embedded ground state.
constexpr Reference kMaster[] = {
    {1.0, 0.99746392636122816, 1.003582184328015, 0.81338502671817547, -0.25025246346724728},
    {2.0, 0.97642890513497727, 1.0256974913275247, 0.71469036351304149, -0.22414913484267474},
};

MasterResult reference_run(bool shells) {
  const FockBasis basis(8);
  const auto params = DimerParams::balanced(0.5, 0.5, 2);
  const auto psi = embed_mean_field(stationary_states(0.5, 0.5).ground, 2, basis);
  MasterOptions opts;
  opts.use_shell_blocks = shells;
  return integrate_master(DensityMatrix::pure(psi), hamiltonian(basis, params.U), params,
                          {0.0, 1.0, 2.0}, opts);
}

}  // namespace

TEST_CASE("master equation matches the superoperator exponential") {
  for (bool shells : {false, true}) {
    const auto run = reference_run(shells);
    REQUIRE(run.states.size() == 3);
    for (std::size_t k = 0; k < 2; ++k) {
      const auto s = single_particle_dm(run.states[k + 1]).sigma;
      const auto& ref = kMaster[k];
      CHECK(s(0, 0).real() == doctest::Approx(ref.n1).epsilon(1e-10));
      CHECK(s(1, 1).real() == doctest::Approx(ref.n2).epsilon(1e-10));
      CHECK(s(0, 1).real() == doctest::Approx(ref.s12_re).epsilon(1e-10));
      CHECK(s(0, 1).imag() == doctest::Approx(ref.s12_im).epsilon(1e-10));
    }
  }
}

TEST_CASE("shell-block generator agrees with the full generator") {
  testing::Rng rng(5);
  const FockBasis basis(6);
  const auto params = DimerParams{0.3, 0.8, 0.6, 4, 1.0};
  const auto H = hamiltonian(basis, params.U);
  const Liouvillian full(basis, H, params);
  const ShellLiouvillian shells(basis, H, params);
  // Random shell-diagonal Hermitian matrix.
  Eigen::MatrixXcd rho = testing::random_density(basis, 4, rng).rho;
  for (int N = 0; N <= 6; ++N) {
    const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(N));
    const auto e = static_cast<Eigen::Index>(FockBasis::shell_end(N));
    rho.block(0, b, b, e - b).setZero();
    rho.block(e, b, rho.rows() - e, e - b).setZero();
  }
  REQUIRE(is_shell_diagonal(DensityMatrix(basis, rho)));
  Eigen::VectorXcd out;
  shells.apply(shells.pack(rho), out);
  CHECK((shells.unpack(out) - full.apply(rho)).norm() < 1e-12);
  CHECK(shells.unpack(shells.pack(rho)) == rho);

  Eigen::MatrixXcd coherent = rho;
  coherent(0, 1) = 0.1;
  CHECK_FALSE(is_shell_diagonal(DensityMatrix(basis, coherent)));
  CHECK_THROWS_AS(shells.pack(coherent), std::invalid_argument);
  // H mixing shells is rejected.
  const auto mixing = hamiltonian(basis, 0.0) + annihilation(basis, 1) + creation(basis, 1);
  CHECK_THROWS_AS(ShellLiouvillian(basis, mixing, params), std::invalid_argument);
}

TEST_CASE("balanced gain cancels the first-order loss") {
  for (int N0 : {2, 10, 30}) {
    for (double gamma : {0.5, 1.0, 1.9}) {
      const FockBasis basis(N0 + 1);
      const auto params = DimerParams::balanced(interaction_from_g(0.5, N0), gamma, N0);
      const auto rho = DensityMatrix::pure(
          embed_mean_field(stationary_states(0.5, gamma).ground, N0, basis));
      const Eigen::MatrixXcd d = liouvillian_apply(rho, hamiltonian(basis, params.U), params);
      const auto Ntot = number_operator(basis, 1) + number_operator(basis, 2);
      CHECK(std::abs(expectation(DensityMatrix(basis, d), Ntot)) < 1e-10);
    }
  }
  CHECK(balanced_gain_rate(0.5, 4) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("single-site closed forms") {
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0};
  const auto loss = integrate_single_site(7, SiteChannel::Loss, 0.8, grid, 7);
  const auto gain = integrate_single_site(3, SiteChannel::Gain, 0.5, grid, 200);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(loss[k] == doctest::Approx(single_site_loss_N(7, 0.8, grid[k])).epsilon(1e-9));
    CHECK(gain[k] == doctest::Approx(single_site_gain_N(3, 0.5, grid[k])).epsilon(1e-9));
  }
  CHECK(single_site_gain_N(0, 1.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0));
}

TEST_CASE("decoupled dimer reduces to the one-mode gain dynamics") {
  const int n_max = 30;
  const FockBasis basis(n_max);
  DimerParams p;
  p.gamma_gain = 0.5;
  p.hopping = 0.0;
  const std::vector<double> grid{0.0, 0.5, 1.0};
  const auto run = integrate_master(DensityMatrix::pure(ManyBodyState::fock(basis, 0, 2)),
                                    hamiltonian(basis, 0.0, 0.0), p, grid);
  const auto one_mode = integrate_single_site(2, SiteChannel::Gain, 0.5, grid, n_max);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(single_particle_dm(run.states[k]).total() ==
          doctest::Approx(one_mode[k]).epsilon(1e-12));
  }
}

TEST_CASE("trace leaks only through the top shell") {
  const FockBasis basis(3);
  DimerParams p;
  p.gamma_gain = 1.0;
  const auto H = hamiltonian(basis, 0.0);
  const auto rho = DensityMatrix::pure(ManyBodyState::fock(basis, 1, 2));
  const Eigen::MatrixXcd d = liouvillian_apply(rho, H, p);
  CHECK(d.trace().real() == doctest::Approx(-3.0));
  const auto run = integrate_master(rho, H, p, {0.0, 0.1});
  CHECK(run.max_top_shell == doctest::Approx(1.0));
  CHECK(run.states.back().trace().real() < 1.0);
}

TEST_CASE("non-physical states are reported") {
  const FockBasis basis(2);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(6, 6);
  r(0, 0) = 1.2;
  r(1, 1) = -0.2;
  DimerParams p;
  CHECK_THROWS_AS(integrate_master(DensityMatrix(basis, r), hamiltonian(basis, 0.0), p, {0.0, 1.0}),
                  NonPhysicalStateError);
  MasterOptions lax;
  lax.check_positivity = false;
  CHECK_NOTHROW(integrate_master(DensityMatrix(basis, r), hamiltonian(basis, 0.0), p, {0.0}, lax));
}

TEST_CASE("observer sees every grid time") {
  const FockBasis basis(4);
  const auto p = DimerParams::balanced(0.2, 0.5, 2);
  std::vector<double> seen;
  MasterOptions opts;
  opts.keep_states = false;
  opts.observer = [&seen](double t, const DensityMatrix&) { seen.push_back(t); };
  const auto run = integrate_master(DensityMatrix::pure(ManyBodyState::fock(basis, 1, 1)),
                                    hamiltonian(basis, p.U), p, {0.0, 0.3, 0.7}, opts);
  CHECK(run.states.empty());
  CHECK(seen == std::vector<double>{0.0, 0.3, 0.7});
  CHECK(run.t == seen);
}

TEST_CASE("input validation") {
  CHECK_THROWS(validate_time_grid({}));
  CHECK_THROWS(validate_time_grid({0.1, 0.2}));
  CHECK_THROWS(validate_time_grid({0.0, 0.2, 0.2}));
  CHECK(substeps(1.0, 1e-3) == 1000);
  CHECK(substeps(1e-5, 1e-3) == 1);
  DimerParams bad;
  bad.gamma_loss = -1.0;
  CHECK_THROWS(bad.validate());
  CHECK_THROWS(single_site_loss_N(1, 1.0, -1.0));
}

TEST_CASE("randomized generator properties") {
  testing::Rng rng(99);
  for (int n_max : {2, 5}) {
    CHECK(testing::lindblad_trace_error(n_max, 4, rng) < 1e-12);
    CHECK(testing::lindblad_hermiticity_error(n_max, 4, rng) < 1e-12);
    CHECK(testing::lindblad_linearity_error(n_max, 4, rng) < 1e-12);
  }
}
