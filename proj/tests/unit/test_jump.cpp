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
#include "ptdimer/jump.hpp"
#include "ptdimer/lindblad.hpp"
#include "ptdimer/observables.hpp"
#include "ptdimer/states.hpp"

using namespace ptdimer;

namespace {

std::vector<double> grid(double t_end, int n) {
  std::vector<double> g;
  for (int k = 0; k <= n; ++k) g.push_back(t_end * k / n);
  return g;
}

}  // namespace

TEST_CASE("random streams") {
  TrajectoryRng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool differs_stream = false, differs_seed = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    differs_stream |= x != c.uniform();
    differs_seed |= x != d.uniform();
  }
  CHECK(differs_stream);
  CHECK(differs_seed);
}

TEST_CASE("effective Hamiltonian carries the decay rates") {
  const FockBasis basis(3);
  DimerParams p{0.2, 0.6, 0.4, 2, 1.0};
  const auto H = hamiltonian(basis, p.U);
  const auto Heff = effective_hamiltonian(basis, H, p);
  CHECK_FALSE(Heff.is_hermitian());
  const SparseMatrixXcd anti = Heff.matrix() - H.matrix();
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto [n1, n2] = basis.state(k);
    CHECK(Heff.coeff(k, k).imag() == doctest::Approx(-0.5 * (0.6 * n1 + 0.4 * (n2 + 1.0))));
  }
  CHECK(anti.real().norm() == 0.0);
}

TEST_CASE("shell-window operators match the sparse operators") {
  const FockBasis basis(6);
  DimerParams p{0.35, 0.7, 0.45, 3, 0.9};
  const JumpModel model(basis, p);
  const SparseOperator G =
      cplx(0.0, -1.0) * effective_hamiltonian(basis, hamiltonian(basis, p.U, p.hopping), p);
  const auto a1 = annihilation(basis, 1);
  const auto a2d = creation(basis, 2);
  std::mt19937_64 rng(11);
  for (const auto& [lo, hi] : {std::pair{0, 6}, std::pair{2, 4}, std::pair{3, 6}, std::pair{1, 1}}) {
    const auto off = FockBasis::shell_begin(lo);
    const auto n = static_cast<Eigen::Index>(FockBasis::shell_end(hi) - off);
    const Eigen::VectorXcd x = testing::random_vector(n, rng);

    Eigen::VectorXcd y, ref(n);
    model.generator(lo, hi).apply(x, y);
    apply_window(G, x, off, ref, off);
    CHECK((y - ref).norm() < 1e-13);

    if (hi >= 1) {
      const int out_lo = std::max(lo - 1, 0);
      const auto out_off = FockBasis::shell_begin(out_lo);
      model.apply_loss(lo, hi, x, y);
      ref.resize(static_cast<Eigen::Index>(FockBasis::shell_end(hi - 1) - out_off));
      apply_window(a1, x, off, ref, out_off);
      CHECK((y - ref).norm() < 1e-13);
    }
    if (lo < basis.n_max()) {
      const int out_hi = std::min(hi + 1, basis.n_max());
      const auto out_off = FockBasis::shell_begin(lo + 1);
      model.apply_gain(lo, hi, x, y);
      ref.resize(static_cast<Eigen::Index>(FockBasis::shell_end(out_hi) - out_off));
      apply_window(a2d, x, off, ref, out_off);
      CHECK((y - ref).norm() < 1e-13);
    }
  }
}

TEST_CASE("initial state may live below the cutoff") {
  const auto p = DimerParams::balanced(0.1, 0.5, 3);
  const auto psi = embed_mean_field(stationary_states(0.3, 0.5).ground, 3, FockBasis(3));
  const auto g = grid(1.0, 5);
  const auto small = ensemble_average(psi, p, g, 20, 5, {.n_max = 30});
  const auto psi_big = embed_mean_field(stationary_states(0.3, 0.5).ground, 3, FockBasis(30));
  const auto big = ensemble_average(psi_big, p, g, 20, 5);
  CHECK(small.mean_of("N") == big.mean_of("N"));
  CHECK(small.mean_of("s12_re") == big.mean_of("s12_re"));
}

TEST_CASE("first jump time inverts the norm decay") {
  // One particle on a lossy isolated site: ||psi||^2 = exp(-gamma t), so the
  // first jump happens at -ln(r) / gamma with r the first uniform draw.
  const FockBasis basis(1);
  DimerParams p;
  p.gamma_loss = 0.8;
  p.hopping = 0.0;
  const JumpModel model(basis, p);
  for (std::uint64_t stream = 0; stream < 20; ++stream) {
    Trajectory traj(model, ManyBodyState::fock(basis, 1, 0), 7, stream);
    traj.advance_to(40.0);
    const double r = TrajectoryRng(7, stream).uniform();
    REQUIRE(traj.jumps().size() == 1);
    CHECK(traj.jumps()[0].t == doctest::Approx(-std::log(r) / 0.8).epsilon(1e-8));
    CHECK(traj.jumps()[0].channel == JumpChannel::Loss);
  }
}

TEST_CASE("norm decays monotonically between jumps") {
  const FockBasis basis(12);
  const auto p = DimerParams::balanced(0.1, 0.5, 4);
  const JumpModel model(basis, p);
  const auto psi = embed_mean_field(stationary_states(0.5, 0.5).ground, 4, basis);
  Trajectory traj(model, psi, 3, 0);
  double last = 1.0;
  std::size_t jumps_seen = 0;
  bool monotone = true;
  traj.on_step = [&](double, double nsq) {
    if (traj.jumps().size() != jumps_seen) {
      jumps_seen = traj.jumps().size();
      last = 1.0;
    }
    monotone &= nsq <= last * (1.0 + 1e-12);
    last = nsq;
  };
  traj.advance_to(5.0);
  CHECK(monotone);
  CHECK(traj.jumps().size() > 0);
}

TEST_CASE("without dissipation a trajectory is the unitary evolution") {
  const FockBasis basis(5);
  const auto p = DimerParams::balanced(0.3, 0.0, 5);
  const auto psi = embed_mean_field(ModeAmplitudes(0.8, 0.6), 5, basis);
  const auto g = grid(2.0, 4);
  const auto rec = run_trajectory(psi, p, g, 1);
  const auto me = integrate_master(DensityMatrix::pure(psi), hamiltonian(basis, p.U), p, g);
  CHECK(rec.jumps.empty());
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK((rec.samples[k].spdm.sigma - single_particle_dm(me.states[k]).sigma).norm() < 1e-9);
  }
}

TEST_CASE("ensemble of one equals the single trajectory") {
  const FockBasis basis(16);
  const auto p = DimerParams::balanced(0.125, 0.5, 4);
  const auto psi = embed_mean_field(stationary_states(0.5, 0.5).ground, 4, basis);
  const auto g = grid(3.0, 30);
  const auto rec = run_trajectory(psi, p, g, 11);
  const auto ens = ensemble_average(psi, p, g, 1, 11);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(ens.mean_of("n1")[k] == rec.samples[k].spdm.sigma(0, 0).real());
    CHECK(ens.mean_of("s12_im")[k] == rec.samples[k].spdm.sigma(0, 1).imag());
    CHECK(ens.se_of("n1")[k] == 0.0);
  }
  CHECK(ens.total_jumps == rec.jumps.size());
}

TEST_CASE("results do not depend on the thread count") {
  const FockBasis basis(16);
  const auto p = DimerParams::balanced(0.125, 0.5, 4);
  const auto psi = embed_mean_field(stationary_states(0.5, 0.5).ground, 4, basis);
  const auto g = grid(2.0, 10);
  EnsembleOptions one, many;
  one.threads = 1;
  many.threads = 3;
  const auto a = ensemble_average(psi, p, g, 37, 5, one);
  const auto b = ensemble_average(psi, p, g, 37, 5, many);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
  CHECK(a.total_jumps == b.total_jumps);
}

TEST_CASE("ensemble reproduces exponential loss") {
  const FockBasis basis(6);
  DimerParams p;
  p.gamma_loss = 0.5;
  p.hopping = 0.0;
  p.N0 = 6;
  const auto g = grid(3.0, 6);
  const auto ens = ensemble_average(ManyBodyState::fock(basis, 6, 0), p, g, 1500, 2);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double exact = single_site_loss_N(6, 0.5, g[k]);
    CHECK(std::abs(ens.mean_of("N")[k] - exact) <= 4.0 * ens.se_of("N")[k] + 1e-12);
  }
}

TEST_CASE("gain out of the top shell aborts") {
  const FockBasis basis(3);
  const auto p = DimerParams::balanced(0.0, 1.0, 3);
  const auto psi = ManyBodyState::fock(basis, 0, 3);
  try {
    ensemble_average(psi, p, grid(4.0, 4), 10, 1);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.aborted() > 0);
    CHECK(e.aborted() <= 10);
  }
}

TEST_CASE("stop predicate ends the run") {
  const FockBasis basis(8);
  const auto p = DimerParams::balanced(0.1, 0.5, 2);
  const auto psi = embed_mean_field(ModeAmplitudes(1.0, 0.0), 2, basis);
  EnsembleOptions opts;
  opts.stop = [](const EnsembleSeries& s) { return s.t.size() == 3; };
  const auto s = ensemble_average(psi, p, grid(1.0, 10), 4, 1, opts);
  CHECK(s.t.size() == 3);
  CHECK(s.stopped);
}

TEST_CASE("Bloch columns") {
  const int N0 = 6;
  const FockBasis basis(12);
  const auto frame = bloch_frame(0.5, 0.1);
  const auto p = DimerParams::balanced(interaction_from_g(0.5, N0), 0.1, N0);
  EnsembleOptions opts;
  opts.frame = frame;
  const auto s = ensemble_average(embed_mean_field(frame.e1, N0, basis), p, grid(1.0, 5), 20, 4,
                                  opts);
  CHECK(s.mean_of("bz")[0] == doctest::Approx(N0));
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    const Eigen::Vector3d bn(s.mean_of("bx_n")[k], s.mean_of("by_n")[k], s.mean_of("bz_n")[k]);
    CHECK(bn.norm() == doctest::Approx(s.mean_of("N")[k]));
  }
}

TEST_CASE("trajectory input validation") {
  const FockBasis basis(2);
  const JumpModel model(basis, DimerParams{});
  CHECK_THROWS(Trajectory(model, ManyBodyState(basis, Eigen::VectorXcd::Zero(6)), 1, 0));
  CHECK_THROWS(Trajectory(model, ManyBodyState::fock(basis, 1, 0), 1, 0, 0.0));
  CHECK_THROWS(Trajectory(model, ManyBodyState::fock(FockBasis(3), 1, 0), 1, 0));
  Trajectory traj(model, ManyBodyState::fock(basis, 1, 0), 1, 0);
  traj.advance_to(0.5);
  CHECK_THROWS(traj.advance_to(0.2));
}
