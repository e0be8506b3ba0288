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

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ptdimer/fock.hpp"
#include "ptdimer/many_body.hpp"

namespace ptdimer {

/// Model parameters of the dimer with loss on site 1 and gain on site 2.
struct DimerParams {
  double U = 0.0;
  double gamma_loss = 0.0;
  double gamma_gain = 0.0;
  int N0 = 1;
  /// Hopping amplitude; 1 for the dimer, 0 to decouple the sites.
  double hopping = 1.0;

  /// gamma_loss = gamma and gamma_gain = gamma * N0 / (N0 + 2).
  static DimerParams balanced(double U, double gamma, int N0);

  void validate() const;
};

/// Gain rate that cancels first-order loss for a state with N0/2 particles
/// on each site: gamma_loss * N0 / (N0 + 2).
double balanced_gain_rate(double gamma_loss, int N0);

/// <N(t)> of a single lossy site holding N0p particles at t = 0.
double single_site_loss_N(int N0p, double gamma_loss, double t);

/// <N(t)> of a single site with gain, N0p particles at t = 0.  N0p = 0 gives
/// the spontaneous-filling limit exp(gamma t) - 1.
double single_site_gain_N(int N0p, double gamma_gain, double t);

/// Dense Lindblad generator for the dimer.
///
///   drho/dt = -i[H, rho]
///             - (gl/2)(n1 rho + rho n1 - 2 a1 rho a1^dag)
///             - (gg/2)(G rho + rho G - 2 a2^dag rho a2),    G = a2 a2^dag
///
/// G is taken as the exact diagonal n2 + 1, while a2^dag drops elements that
/// would exceed n_max.  Population on the top shell therefore leaks out of
/// the trace at rate gg (n2 + 1); everywhere else the trace is conserved.
class Liouvillian {
 public:
  Liouvillian(const FockBasis& basis, const SparseOperator& H, const DimerParams& params);

  const FockBasis& basis() const { return basis_; }

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
  /// out = L(rho); scratch is resized as needed.
  void apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out, Eigen::MatrixXcd& scratch) const;

 private:
  FockBasis basis_;
  SparseMatrixXcd H_;
  SparseMatrixXcd a1_;
  SparseMatrixXcd a2dag_;
  Eigen::VectorXd anti_;  // (gl n1 + gg (n2 + 1)) / 2
  double gamma_loss_;
  double gamma_gain_;
};

/// The same generator acting on density matrices without coherences between
/// different total particle numbers.
///
/// H conserves N and every jump moves both sides of rho by the same shell, so
/// such states stay block diagonal.  Blocks rho_N (size N+1, local index n2)
/// are stored column-major one after another in a single vector.
class ShellLiouvillian {
 public:
  /// Throws if H couples different shells.
  ShellLiouvillian(const FockBasis& basis, const SparseOperator& H, const DimerParams& params);

  const FockBasis& basis() const { return basis_; }
  Eigen::Index packed_size() const { return offsets_.back(); }
  Eigen::Index block_offset(int N) const { return offsets_[static_cast<std::size_t>(N)]; }

  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const;

  /// Throws if rho has coherences between shells.
  Eigen::VectorXcd pack(const Eigen::MatrixXcd& rho) const;
  Eigen::MatrixXcd unpack(const Eigen::VectorXcd& x) const;

  /// Smallest eigenvalue over all blocks.
  double min_eigenvalue(const Eigen::VectorXcd& x) const;
  /// Trace of the top-shell block.
  double top_shell_population(const Eigen::VectorXcd& x) const;
  /// Make every block Hermitian.
  void symmetrize(Eigen::VectorXcd& x) const;

 private:
  FockBasis basis_;
  std::vector<Eigen::Index> offsets_;
  std::vector<SparseMatrixXcd> H_;     // shell N -> N
  std::vector<SparseMatrixXcd> loss_;  // a1: shell N+1 -> N
  std::vector<SparseMatrixXcd> gain_;  // a2^dag: shell N-1 -> N
  std::vector<Eigen::VectorXd> anti_;
  double gamma_loss_;
  double gamma_gain_;
};

/// True when rho has no coherences between different total particle numbers.
bool is_shell_diagonal(const DensityMatrix& rho);

Eigen::MatrixXcd liouvillian_apply(const DensityMatrix& rho, const SparseOperator& H,
                                   const DimerParams& params);

struct MasterOptions {
  double dt = 1e-3;
  /// Abort if an output state has an eigenvalue below this.
  double positivity_tolerance = -1e-6;
  bool check_positivity = true;
  /// Integrate shell by shell when rho0 is shell diagonal (exact, much
  /// cheaper); otherwise the full matrix is propagated.
  bool use_shell_blocks = true;
  /// Store every sampled state in MasterResult::states.
  bool keep_states = true;
  /// Called with every sampled state.
  std::function<void(double t, const DensityMatrix& rho)> observer;
};

struct MasterResult {
  std::vector<double> t;
  std::vector<DensityMatrix> states;
  /// Largest top-shell population seen at any grid time.
  double max_top_shell = 0.0;
};

/// Fixed-step RK4 integration of the master equation, sampled on t_grid.
///
/// t_grid must start at 0 and increase strictly.  Each interval is split
/// into equal steps no longer than options.dt.  rho is re-symmetrized after
/// every step.  Positivity is checked per shell block on the block path.  Throws NonPhysicalStateError when a sampled state has an
/// eigenvalue below options.positivity_tolerance.
MasterResult integrate_master(const DensityMatrix& rho0, const SparseOperator& H,
                              const DimerParams& params, const std::vector<double>& t_grid,
                              const MasterOptions& options = {});

enum class SiteChannel { Loss, Gain };

/// Master-equation integration for one isolated site with a single channel
/// (H = 0), truncated at n_cap particles, starting from the number state
/// |N0p>.  Coherences stay zero, so only the populations are propagated.
/// Returns <N> at each grid time.  This is the reduced dynamics of the dimer
/// with hopping removed; it reaches cutoffs far beyond what the two-site
/// representation can hold.
std::vector<double> integrate_single_site(int N0p, SiteChannel channel, double gamma,
                                          const std::vector<double>& t_grid, int n_cap,
                                          double dt = 1e-3);

/// trace(op rho).
cplx expectation(const DensityMatrix& rho, const SparseOperator& op);

/// <psi|op|psi> on the unnormalized vector.
cplx expectation(const ManyBodyState& psi, const SparseOperator& op);

/// Check that t_grid starts at zero and increases strictly.
void validate_time_grid(const std::vector<double>& t_grid);

/// Number of equal substeps of length <= dt covering span.
int substeps(double span, double dt);

}  // namespace ptdimer
