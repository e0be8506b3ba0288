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

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptdimer/fock.hpp"
#include "ptdimer/lindblad.hpp"
#include "ptdimer/many_body.hpp"
#include "ptdimer/observables.hpp"

namespace ptdimer {

/// H_eff = H - (i/2)[gamma_loss a1^dag a1 + gamma_gain a2 a2^dag], with
/// a2 a2^dag = n2 + 1 taken exactly (also on the top shell).
SparseOperator effective_hamiltonian(const FockBasis& basis, const SparseOperator& H,
                                     const DimerParams& params);

/// Uniform random stream for one trajectory.
///
/// Streams are mt19937_64 engines seeded through std::seed_seq from the
/// (seed, stream) pair, so every trajectory index gets its own sequence
/// regardless of which worker runs it.
class TrajectoryRng {
 public:
  TrajectoryRng(std::uint64_t seed, std::uint64_t stream);
  /// Uniform double in the open interval (0, 1), 53 bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
};

/// -i H_eff restricted to the shells [lo, hi] of a compressed vector.
///
/// Within shell N (local index n2) H_eff is tridiagonal, so the generator is
/// stored as a diagonal and the coupling of each entry to its predecessor;
/// couplings across shell boundaries are zero.
struct WindowGenerator {
  int lo = 0;
  int hi = -1;
  Eigen::VectorXcd diag;
  Eigen::VectorXcd lower;  // lower[i] couples i and i - 1
  /// Upper bound on the spectral radius of the off-diagonal part.
  double hopping_bound = 0.0;

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  void apply_offdiagonal(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
};

/// Dimer model for the jump engine.  Matrix elements are generated per
/// shell on demand, so memory scales with the occupied shells and not with
/// the cutoff.
struct JumpModel {
  JumpModel(const FockBasis& basis, const DimerParams& params);

  FockBasis basis;  // cutoff n_max
  DimerParams params;

  WindowGenerator generator(int lo, int hi) const;
  /// a1 applied to shells [lo, hi]; y covers shells [max(lo - 1, 0), hi - 1].
  void apply_loss(int lo, int hi, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  /// a2^dag applied to shells [lo, hi]; y covers shells [lo + 1, min(hi + 1, n_max)].
  void apply_gain(int lo, int hi, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
};

enum class JumpChannel { Loss, Gain };

struct JumpEvent {
  double t;
  JumpChannel channel;
};

/// Observables of one trajectory at one time.
struct TrajectorySample {
  double t = 0.0;
  SinglePartDM spdm;
  double top_shell = 0.0;
};

/// Monte-Carlo wave-function trajectory.
///
/// The unnormalized state evolves under H_eff until its squared norm falls
/// to a uniform threshold r.  Steps use an integrating-factor RK4 with the
/// diagonal part exact, split into substeps at large particle numbers so the
/// hopping stays resolved.  The crossing is refined by bisection to 1e-6 dt, a channel is chosen with probability proportional
/// to gamma_k ||L_k psi||^2, and the state is renormalized.  Only the
/// particle-number shells that carry amplitude are stored and propagated.
///
/// Gain out of the top shell is a third outcome: it would leave the basis,
/// so choosing it aborts the trajectory with a TruncationError.
class Trajectory {
 public:
  /// psi0 may live in a smaller basis than the model cutoff.
  Trajectory(const JumpModel& model, const ManyBodyState& psi0, std::uint64_t seed,
             std::uint64_t stream, double dt = 1e-3);

  /// Evolve to time t (>= time()).  Throws TruncationError on abort.
  void advance_to(double t);

  double time() const { return t_; }
  bool aborted() const { return aborted_; }
  const std::vector<JumpEvent>& jumps() const { return jumps_; }

  /// Squared norm of the unnormalized state (decays between jumps).
  double norm_squared() const { return psi_.squaredNorm(); }

  /// Occupied shells.
  int lowest_shell() const { return lo_; }
  int highest_shell() const { return hi_; }

  /// Normalized state embedded in the full basis of the model cutoff.
  ManyBodyState state() const;
  TrajectorySample sample() const;

  /// Called after every RK4 step without a jump with the new squared norm;
  /// used by tests.
  std::function<void(double t, double norm_sq)> on_step;

 private:
  void set_window(int lo, int hi);
  void rk4_step(const Eigen::VectorXcd& from, Eigen::VectorXcd& to, double h);
  void if_rk4(const Eigen::VectorXcd& from, Eigen::VectorXcd& to, double h);
  void jump();
  void trim();

  const JumpModel* model_;
  TrajectoryRng rng_;
  double dt_;
  double t_ = 0.0;
  double threshold_;
  bool aborted_ = false;
  int lo_ = 0;
  int hi_ = 0;
  std::size_t offset_ = 0;
  Eigen::VectorXcd psi_;
  WindowGenerator gen_;
  Eigen::VectorXcd k1_, k2_, k3_, k4_, tmp_, trial_, half_, full_, base_;
  double cached_h_ = -1.0;
  std::vector<JumpEvent> jumps_;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  std::vector<JumpEvent> jumps;
};

/// Single trajectory sampled on t_grid; uses stream 0 of `seed`.
TrajectoryRecord run_trajectory(const ManyBodyState& psi0, const DimerParams& params,
                                const std::vector<double>& t_grid, std::uint64_t seed,
                                double dt = 1e-3);

/// Ensemble means and standard errors on a time grid.
///
/// Columns: n1, n2, N, s12_re, s12_im, and when a Bloch frame is supplied
/// bx, by, bz (raw Bloch components; means equal the Bloch vector of the
/// averaged single-particle density matrix) plus bx_n, by_n, bz_n, the
/// mean Bloch vector rescaled to length <N>, whose standard errors are the
/// raw ones times <N>/|b|.
struct EnsembleSeries {
  std::vector<double> t;
  std::map<std::string, std::vector<double>> mean;
  std::map<std::string, std::vector<double>> se;
  std::size_t n_traj = 0;
  std::uint64_t seed = 0;
  std::size_t total_jumps = 0;
  double max_top_shell = 0.0;
  /// Largest single-trajectory <N> at any grid time.
  double max_N = 0.0;
  /// True when the stop predicate ended the run before the last grid time.
  bool stopped = false;

  const std::vector<double>& mean_of(const std::string& name) const { return mean.at(name); }
  const std::vector<double>& se_of(const std::string& name) const { return se.at(name); }
};

struct EnsembleOptions {
  double dt = 1e-3;
  /// Particle-number cutoff; defaults to the cutoff of psi0's basis.
  std::optional<int> n_max;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
  std::optional<BlochFrame> frame;
  /// Evaluated after each grid time on the series so far; returning true
  /// ends the run at that time.
  std::function<bool(const EnsembleSeries&)> stop;
};

/// Average of n_traj trajectories with streams 0..n_traj-1 of `seed`.
/// Trajectories are reduced in index order, so the result does not depend
/// on the thread count.  Throws TruncationError carrying the number of
/// aborted trajectories if any trajectory left the basis.
EnsembleSeries ensemble_average(const ManyBodyState& psi0, const DimerParams& params,
                                const std::vector<double>& t_grid, std::size_t n_traj,
                                std::uint64_t seed, const EnsembleOptions& options = {});

}  // namespace ptdimer
