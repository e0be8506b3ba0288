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

#include "ptdimer/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ptdimer/errors.hpp"
#include "ptdimer/rk4.hpp"

namespace ptdimer {

DimerParams DimerParams::balanced(double U, double gamma, int N0) {
  DimerParams p;
  p.U = U;
  p.gamma_loss = gamma;
  p.gamma_gain = balanced_gain_rate(gamma, N0);
  p.N0 = N0;
  return p;
}

void DimerParams::validate() const {
  if (!std::isfinite(U) || !std::isfinite(gamma_loss) || !std::isfinite(gamma_gain) ||
      !std::isfinite(hopping)) {
    throw std::invalid_argument("DimerParams: non-finite parameter");
  }
  if (gamma_loss < 0.0 || gamma_gain < 0.0) {
    throw std::invalid_argument("DimerParams: rates must be non-negative");
  }
  if (N0 < 1) throw std::invalid_argument("DimerParams: N0 must be >= 1");
}

double balanced_gain_rate(double gamma_loss, int N0) {
  if (N0 < 1) throw std::invalid_argument("balanced_gain_rate: N0 must be >= 1");
  return gamma_loss * static_cast<double>(N0) / static_cast<double>(N0 + 2);
}

double single_site_loss_N(int N0p, double gamma_loss, double t) {
  if (t < 0.0) throw std::invalid_argument("single_site_loss_N: t must be >= 0");
  return static_cast<double>(N0p) * std::exp(-gamma_loss * t);
}

double single_site_gain_N(int N0p, double gamma_gain, double t) {
  if (t < 0.0) throw std::invalid_argument("single_site_gain_N: t must be >= 0");
  if (N0p < 0) throw std::invalid_argument("single_site_gain_N: N0p must be >= 0");
  // N0p [(1 + 1/N0p) e^{gt} - 1/N0p] rewritten so that N0p = 0 is regular.
  const double n = static_cast<double>(N0p);
  return (n + 1.0) * std::exp(gamma_gain * t) - 1.0;
}

Liouvillian::Liouvillian(const FockBasis& basis, const SparseOperator& H,
                         const DimerParams& params)
    : basis_(basis),
      H_(H.matrix()),
      a1_(annihilation(basis, 1).matrix()),
      a2dag_(creation(basis, 2).matrix()),
      gamma_loss_(params.gamma_loss),
      gamma_gain_(params.gamma_gain) {
  params.validate();
  if (H.dim() != basis.dim()) throw std::invalid_argument("Liouvillian: H does not match basis");
  anti_.resize(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto [n1, n2] = basis.state(k);
    anti_[static_cast<Eigen::Index>(k)] =
        0.5 * (gamma_loss_ * n1 + gamma_gain_ * (n2 + 1.0));
  }
}

Eigen::MatrixXcd Liouvillian::apply(const Eigen::MatrixXcd& rho) const {
  Eigen::MatrixXcd out, scratch;
  apply(rho, out, scratch);
  return out;
}

void Liouvillian::apply(const Eigen::MatrixXcd& rho, Eigen::MatrixXcd& out,
                        Eigen::MatrixXcd& scratch) const {
  const auto d = static_cast<Eigen::Index>(basis_.dim());
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("Liouvillian: dimension mismatch");
  }
  const cplx i(0.0, 1.0);
  // Commutator.
  out.noalias() = -i * (H_ * rho);
  out.noalias() += i * (rho * H_);
  // Anticommutator parts of both channels.
  out -= anti_.asDiagonal() * rho;
  out -= rho * anti_.asDiagonal();
  // Sandwich terms.
  if (gamma_loss_ != 0.0) {
    scratch.noalias() = a1_ * rho;
    out.noalias() += gamma_loss_ * (scratch * a1_.adjoint());
  }
  if (gamma_gain_ != 0.0) {
    scratch.noalias() = a2dag_ * rho;
    out.noalias() += gamma_gain_ * (scratch * a2dag_.adjoint());
  }
}

namespace {

int shell_of(const FockBasis& basis, Eigen::Index k) {
  const auto [n1, n2] = basis.state(static_cast<std::size_t>(k));
  return n1 + n2;
}

Eigen::Index local_index(Eigen::Index k, int N) {
  return k - static_cast<Eigen::Index>(FockBasis::shell_begin(N));
}

/// Blocks of `op` that map shell N + shift to shell N, indexed by N.
std::vector<SparseMatrixXcd> shell_blocks(const FockBasis& basis, const SparseMatrixXcd& op,
                                          int shift, const char* what) {
  const int n_max = basis.n_max();
  std::vector<std::vector<Eigen::Triplet<cplx>>> entries(static_cast<std::size_t>(n_max + 1));
  for (int r = 0; r < op.outerSize(); ++r) {
    for (SparseMatrixXcd::InnerIterator it(op, r); it; ++it) {
      const int Nr = shell_of(basis, it.row());
      const int Nc = shell_of(basis, it.col());
      if (Nc != Nr + shift) {
        throw std::invalid_argument(std::string("ShellLiouvillian: ") + what +
                                    " does not map between the expected shells");
      }
      entries[static_cast<std::size_t>(Nr)].emplace_back(
          static_cast<int>(local_index(it.row(), Nr)), static_cast<int>(local_index(it.col(), Nc)),
          it.value());
    }
  }
  std::vector<SparseMatrixXcd> out;
  for (int N = 0; N <= n_max; ++N) {
    const int cols = N + shift + 1;
    SparseMatrixXcd m(N + 1, std::max(cols, 0));
    if (cols > 0) {
      const auto& e = entries[static_cast<std::size_t>(N)];
      m.setFromTriplets(e.begin(), e.end());
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

ShellLiouvillian::ShellLiouvillian(const FockBasis& basis, const SparseOperator& H,
                                   const DimerParams& params)
    : basis_(basis), gamma_loss_(params.gamma_loss), gamma_gain_(params.gamma_gain) {
  params.validate();
  if (H.dim() != basis.dim()) {
    throw std::invalid_argument("ShellLiouvillian: H does not match basis");
  }
  const int n_max = basis.n_max();
  offsets_.push_back(0);
  for (int N = 0; N <= n_max; ++N) {
    offsets_.push_back(offsets_.back() + static_cast<Eigen::Index>(N + 1) * (N + 1));
    Eigen::VectorXd a(N + 1);
    for (int n2 = 0; n2 <= N; ++n2) {
      a[n2] = 0.5 * (gamma_loss_ * (N - n2) + gamma_gain_ * (n2 + 1.0));
    }
    anti_.push_back(std::move(a));
  }
  H_ = shell_blocks(basis, H.matrix(), 0, "H");
  loss_ = shell_blocks(basis, annihilation(basis, 1).matrix(), 1, "a1");
  gain_ = shell_blocks(basis, creation(basis, 2).matrix(), -1, "a2^dag");
}

void ShellLiouvillian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& out) const {
  if (x.size() != packed_size()) throw std::invalid_argument("ShellLiouvillian: size mismatch");
  out.resize(x.size());
  const cplx i(0.0, 1.0);
  const int n_max = basis_.n_max();
  Eigen::MatrixXcd tmp;
  for (int N = 0; N <= n_max; ++N) {
    const auto n = static_cast<std::size_t>(N);
    const Eigen::Index d = N + 1;
    const Eigen::Map<const Eigen::MatrixXcd> r(x.data() + offsets_[n], d, d);
    Eigen::Map<Eigen::MatrixXcd> o(out.data() + offsets_[n], d, d);
    o.noalias() = -i * (H_[n] * r);
    o.noalias() += i * (r * H_[n]);
    o -= anti_[n].asDiagonal() * r;
    o -= r * anti_[n].asDiagonal();
    if (gamma_loss_ != 0.0 && N < n_max) {
      const Eigen::Map<const Eigen::MatrixXcd> up(x.data() + offsets_[n + 1], d + 1, d + 1);
      tmp.noalias() = loss_[n] * up;
      o.noalias() += gamma_loss_ * (tmp * loss_[n].adjoint());
    }
    if (gamma_gain_ != 0.0 && N > 0) {
      const Eigen::Map<const Eigen::MatrixXcd> down(x.data() + offsets_[n - 1], d - 1, d - 1);
      tmp.noalias() = gain_[n] * down;
      o.noalias() += gamma_gain_ * (tmp * gain_[n].adjoint());
    }
  }
}

Eigen::VectorXcd ShellLiouvillian::pack(const Eigen::MatrixXcd& rho) const {
  const auto dim = static_cast<Eigen::Index>(basis_.dim());
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("ShellLiouvillian::pack: dimension mismatch");
  }
  DensityMatrix view(basis_, rho);
  if (!is_shell_diagonal(view)) {
    throw std::invalid_argument("ShellLiouvillian::pack: rho has inter-shell coherences");
  }
  Eigen::VectorXcd x(packed_size());
  for (int N = 0; N <= basis_.n_max(); ++N) {
    const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(N));
    Eigen::Map<Eigen::MatrixXcd>(x.data() + offsets_[static_cast<std::size_t>(N)], N + 1, N + 1) =
        rho.block(b, b, N + 1, N + 1);
  }
  return x;
}

Eigen::MatrixXcd ShellLiouvillian::unpack(const Eigen::VectorXcd& x) const {
  const auto dim = static_cast<Eigen::Index>(basis_.dim());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int N = 0; N <= basis_.n_max(); ++N) {
    const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(N));
    rho.block(b, b, N + 1, N + 1) = Eigen::Map<const Eigen::MatrixXcd>(
        x.data() + offsets_[static_cast<std::size_t>(N)], N + 1, N + 1);
  }
  return rho;
}

double ShellLiouvillian::min_eigenvalue(const Eigen::VectorXcd& x) const {
  double lam = std::numeric_limits<double>::infinity();
  for (int N = 0; N <= basis_.n_max(); ++N) {
    const Eigen::MatrixXcd block = Eigen::Map<const Eigen::MatrixXcd>(
        x.data() + offsets_[static_cast<std::size_t>(N)], N + 1, N + 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block, Eigen::EigenvaluesOnly);
    lam = std::min(lam, solver.eigenvalues().minCoeff());
  }
  return lam;
}

double ShellLiouvillian::top_shell_population(const Eigen::VectorXcd& x) const {
  const int N = basis_.n_max();
  return Eigen::Map<const Eigen::MatrixXcd>(x.data() + offsets_[static_cast<std::size_t>(N)],
                                            N + 1, N + 1)
      .trace()
      .real();
}

void ShellLiouvillian::symmetrize(Eigen::VectorXcd& x) const {
  for (int N = 0; N <= basis_.n_max(); ++N) {
    Eigen::Map<Eigen::MatrixXcd> b(x.data() + offsets_[static_cast<std::size_t>(N)], N + 1, N + 1);
    b = 0.5 * (b + b.adjoint()).eval();
  }
}

bool is_shell_diagonal(const DensityMatrix& rho) {
  const int n_max = rho.basis.n_max();
  for (int N = 0; N <= n_max; ++N) {
    const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(N));
    const auto e = static_cast<Eigen::Index>(FockBasis::shell_end(N));
    const auto dim = rho.rho.rows();
    // Columns of shell N must vanish outside rows [b, e).
    if (b > 0 && !rho.rho.block(0, b, b, e - b).isZero(0.0)) return false;
    if (e < dim && !rho.rho.block(e, b, dim - e, e - b).isZero(0.0)) return false;
  }
  return true;
}

Eigen::MatrixXcd liouvillian_apply(const DensityMatrix& rho, const SparseOperator& H,
                                   const DimerParams& params) {
  if (H.dim() != rho.basis.dim()) {
    throw std::invalid_argument("liouvillian_apply: dimension mismatch");
  }
  return Liouvillian(rho.basis, H, params).apply(rho.rho);
}

void validate_time_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
  if (t_grid.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) {
      throw std::invalid_argument("time grid must increase strictly");
    }
  }
}

int substeps(double span, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  return std::max(1, static_cast<int>(std::ceil(span / dt - 1e-9)));
}

namespace {

void check_positive(double lam, double t, const MasterOptions& options) {
  if (options.check_positivity && lam < options.positivity_tolerance) {
    std::ostringstream msg;
    msg << "non-physical density matrix at t=" << t << ": min eigenvalue " << lam;
    throw NonPhysicalStateError(msg.str());
  }
}

void emit(MasterResult& result, const MasterOptions& options, double t, DensityMatrix state) {
  if (options.observer) options.observer(t, state);
  result.t.push_back(t);
  if (options.keep_states) result.states.push_back(std::move(state));
}

MasterResult integrate_dense(const DensityMatrix& rho0, const SparseOperator& H,
                             const DimerParams& params, const std::vector<double>& t_grid,
                             const MasterOptions& options) {
  const Liouvillian L(rho0.basis, H, params);
  MasterResult result;
  Eigen::MatrixXcd rho = rho0.rho;
  Eigen::MatrixXcd scratch;
  Rk4<Eigen::MatrixXcd> rk4;
  auto deriv = [&](const Eigen::MatrixXcd& y, Eigen::MatrixXcd& dy) { L.apply(y, dy, scratch); };
  auto record = [&](double t) {
    DensityMatrix state(rho0.basis, rho);
    result.max_top_shell = std::max(result.max_top_shell, state.top_shell_population());
    if (options.check_positivity) check_positive(state.min_eigenvalue(), t, options);
    emit(result, options, t, std::move(state));
  };
  record(t_grid.front());
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t_grid[k - 1];
    const int n = substeps(span, options.dt);
    const double h = span / n;
    for (int s = 0; s < n; ++s) {
      rk4.step(rho, h, deriv);
      rho = 0.5 * (rho + rho.adjoint()).eval();
    }
    record(t_grid[k]);
  }
  return result;
}

MasterResult integrate_shells(const DensityMatrix& rho0, const SparseOperator& H,
                              const DimerParams& params, const std::vector<double>& t_grid,
                              const MasterOptions& options) {
  const ShellLiouvillian L(rho0.basis, H, params);
  MasterResult result;
  Eigen::VectorXcd x = L.pack(rho0.rho);
  Rk4<Eigen::VectorXcd> rk4;
  auto deriv = [&](const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) { L.apply(y, dy); };
  auto record = [&](double t) {
    result.max_top_shell = std::max(result.max_top_shell, L.top_shell_population(x));
    if (options.check_positivity) check_positive(L.min_eigenvalue(x), t, options);
    if (options.observer || options.keep_states) {
      emit(result, options, t, DensityMatrix(rho0.basis, L.unpack(x)));
    } else {
      result.t.push_back(t);
    }
  };
  record(t_grid.front());
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t_grid[k - 1];
    const int n = substeps(span, options.dt);
    const double h = span / n;
    for (int s = 0; s < n; ++s) {
      rk4.step(x, h, deriv);
      L.symmetrize(x);
    }
    record(t_grid[k]);
  }
  return result;
}

bool conserves_number(const FockBasis& basis, const SparseOperator& H) {
  const auto& m = H.matrix();
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrixXcd::InnerIterator it(m, r); it; ++it) {
      if (shell_of(basis, it.row()) != shell_of(basis, it.col())) return false;
    }
  }
  return true;
}

}  // namespace

MasterResult integrate_master(const DensityMatrix& rho0, const SparseOperator& H,
                              const DimerParams& params, const std::vector<double>& t_grid,
                              const MasterOptions& options) {
  validate_time_grid(t_grid);
  if (H.dim() != rho0.basis.dim()) {
    throw std::invalid_argument("integrate_master: H does not match basis");
  }
  if (options.use_shell_blocks && is_shell_diagonal(rho0) && conserves_number(rho0.basis, H)) {
    return integrate_shells(rho0, H, params, t_grid, options);
  }
  return integrate_dense(rho0, H, params, t_grid, options);
}

std::vector<double> integrate_single_site(int N0p, SiteChannel channel, double gamma,
                                          const std::vector<double>& t_grid, int n_cap,
                                          double dt) {
  validate_time_grid(t_grid);
  if (N0p < 0 || N0p > n_cap) throw std::invalid_argument("integrate_single_site: bad N0p");
  if (gamma < 0.0) throw std::invalid_argument("integrate_single_site: gamma must be >= 0");
  const Eigen::Index d = n_cap + 1;
  // Without a Hamiltonian the populations p_n = rho_nn of a Fock initial
  // state obey a closed set of equations:
  //   loss: dp_n = gamma [(n+1) p_{n+1} - n p_n]
  //   gain: dp_n = gamma [n p_{n-1} - (n+1) p_n], with the flow above n_cap lost.
  Eigen::VectorXd p = Eigen::VectorXd::Zero(d);
  p[N0p] = 1.0;
  auto deriv = [&](const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(d);
    for (Eigen::Index n = 0; n < d; ++n) {
      const double nn = static_cast<double>(n);
      if (channel == SiteChannel::Loss) {
        dy[n] = gamma * ((n + 1 < d ? (nn + 1.0) * y[n + 1] : 0.0) - nn * y[n]);
      } else {
        dy[n] = gamma * ((n > 0 ? nn * y[n - 1] : 0.0) - (nn + 1.0) * y[n]);
      }
    }
  };
  auto mean_n = [&] {
    return Eigen::VectorXd::LinSpaced(d, 0.0, static_cast<double>(n_cap)).dot(p);
  };
  Rk4<Eigen::VectorXd> rk4;
  std::vector<double> out{mean_n()};
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double span = t_grid[k] - t_grid[k - 1];
    const int n = substeps(span, dt);
    for (int s = 0; s < n; ++s) rk4.step(p, span / n, deriv);
    out.push_back(mean_n());
  }
  return out;
}

cplx expectation(const DensityMatrix& rho, const SparseOperator& op) {
  if (op.dim() != rho.basis.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  cplx acc(0.0);
  const auto& m = op.matrix();
  for (int r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrixXcd::InnerIterator it(m, r); it; ++it) {
      acc += it.value() * rho.rho(it.col(), it.row());
    }
  }
  return acc;
}

cplx expectation(const ManyBodyState& psi, const SparseOperator& op) {
  if (op.dim() != psi.basis.dim()) throw std::invalid_argument("expectation: dimension mismatch");
  return psi.amplitudes.dot(op.matrix() * psi.amplitudes);
}

}  // namespace ptdimer
