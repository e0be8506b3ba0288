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

#include "ptdimer/jump.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ptdimer/errors.hpp"

namespace ptdimer {

SparseOperator effective_hamiltonian(const FockBasis& basis, const SparseOperator& H,
                                     const DimerParams& params) {
  params.validate();
  if (H.dim() != basis.dim()) {
    throw std::invalid_argument("effective_hamiltonian: H does not match basis");
  }
  std::vector<SparseOperator::Triplet> decay;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto [n1, n2] = basis.state(k);
    const double rate = params.gamma_loss * n1 + params.gamma_gain * (n2 + 1.0);
    if (rate != 0.0) {
      decay.emplace_back(static_cast<int>(k), static_cast<int>(k), cplx(0.0, -0.5 * rate));
    }
  }
  const SparseOperator anti(basis.dim(), decay, false);
  return SparseOperator(SparseMatrixXcd(H.matrix() + anti.matrix()), decay.empty() && H.is_hermitian());
}

TrajectoryRng::TrajectoryRng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double TrajectoryRng::uniform() {
  for (;;) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    if (u > 0.0) return u;
  }
}

JumpModel::JumpModel(const FockBasis& b, const DimerParams& p) : basis(b), params(p) {
  params.validate();
}

void WindowGenerator::apply_offdiagonal(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const auto n = x.size();
  y.resize(n);
  y[0] = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    y[i] = lower[i] * x[i - 1];
    y[i - 1] += lower[i] * x[i];
  }
}

void WindowGenerator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  apply_offdiagonal(x, y);
  y += diag.cwiseProduct(x);
}

WindowGenerator JumpModel::generator(int lo, int hi) const {
  WindowGenerator g;
  g.lo = lo;
  g.hi = hi;
  const auto off = FockBasis::shell_begin(lo);
  const auto n = static_cast<Eigen::Index>(FockBasis::shell_end(hi) - off);
  g.diag.resize(n);
  g.lower = Eigen::VectorXcd::Zero(n);
  const double J = params.hopping;
  const double gl = params.gamma_loss;
  const double gg = params.gamma_gain;
  g.hopping_bound = std::abs(J) * hi;
  Eigen::Index i = 0;
  for (int N = lo; N <= hi; ++N) {
    for (int j = 0; j <= N; ++j, ++i) {
      const double n1 = N - j;
      const double n2 = j;
      const double e = 0.5 * params.U * (n1 * (n1 - 1.0) + n2 * (n2 - 1.0));
      g.diag[i] = cplx(-0.5 * (gl * n1 + gg * (n2 + 1.0)), -e);
      if (j > 0) g.lower[i] = cplx(0.0, J * std::sqrt((n1 + 1.0) * n2));
    }
  }
  return g;
}

void JumpModel::apply_loss(int lo, int hi, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const int out_lo = std::max(lo - 1, 0);
  const auto out_off = FockBasis::shell_begin(out_lo);
  y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(FockBasis::shell_end(hi - 1) - out_off));
  const auto in_off = FockBasis::shell_begin(lo);
  for (int N = std::max(lo, 1); N <= hi; ++N) {
    const auto src = static_cast<Eigen::Index>(FockBasis::shell_begin(N) - in_off);
    const auto dst = static_cast<Eigen::Index>(FockBasis::shell_begin(N - 1) - out_off);
    for (int j = 0; j < N; ++j) y[dst + j] = std::sqrt(static_cast<double>(N - j)) * x[src + j];
  }
}

void JumpModel::apply_gain(int lo, int hi, const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const int top = std::min(hi, basis.n_max() - 1);
  const auto out_off = FockBasis::shell_begin(lo + 1);
  y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(FockBasis::shell_end(top + 1) - out_off));
  const auto in_off = FockBasis::shell_begin(lo);
  for (int N = lo; N <= top; ++N) {
    const auto src = static_cast<Eigen::Index>(FockBasis::shell_begin(N) - in_off);
    const auto dst = static_cast<Eigen::Index>(FockBasis::shell_begin(N + 1) - out_off);
    for (int j = 0; j <= N; ++j) y[dst + j + 1] = std::sqrt(j + 1.0) * x[src + j];
  }
}

namespace {

// Shells [lo, hi] that carry amplitude in a full-basis vector.
std::pair<int, int> occupied_shells(const FockBasis& basis, const Eigen::VectorXcd& v) {
  int lo = -1;
  int hi = -1;
  for (int N = 0; N <= basis.n_max(); ++N) {
    const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(N));
    const auto e = static_cast<Eigen::Index>(FockBasis::shell_end(N));
    if (v.segment(b, e - b).squaredNorm() > 0.0) {
      if (lo < 0) lo = N;
      hi = N;
    }
  }
  if (lo < 0) throw std::invalid_argument("Trajectory: zero initial state");
  return {lo, hi};
}

}  // namespace

Trajectory::Trajectory(const JumpModel& model, const ManyBodyState& psi0, std::uint64_t seed,
                       std::uint64_t stream, double dt)
    : model_(&model), rng_(seed, stream), dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("Trajectory: dt must be > 0");
  if (psi0.basis.n_max() > model.basis.n_max()) {
    throw std::invalid_argument("Trajectory: initial state exceeds the model cutoff");
  }
  if (std::abs(psi0.amplitudes.squaredNorm() - 1.0) > 1e-8) {
    throw std::invalid_argument("Trajectory: initial state must be normalized");
  }
  const auto [lo, hi] = occupied_shells(psi0.basis, psi0.amplitudes);
  set_window(lo, hi);
  psi_ = psi0.amplitudes.segment(static_cast<Eigen::Index>(offset_), psi_.size()).normalized();
  threshold_ = rng_.uniform();
}

void Trajectory::set_window(int lo, int hi) {
  const bool same = lo == lo_ && hi == hi_ && gen_.hi >= gen_.lo;
  lo_ = lo;
  hi_ = hi;
  offset_ = FockBasis::shell_begin(lo);
  psi_.resize(static_cast<Eigen::Index>(FockBasis::shell_end(hi) - offset_));
  if (!same) {
    gen_ = model_->generator(lo, hi);
    cached_h_ = -1.0;
  }
}

// Lawson RK4: u' = D u + B u with exp(D h) applied exactly.
void Trajectory::if_rk4(const Eigen::VectorXcd& from, Eigen::VectorXcd& to, double h) {
  if (h != cached_h_) {
    half_ = (gen_.diag * (0.5 * h)).array().exp().matrix();
    full_ = half_.cwiseProduct(half_);
    cached_h_ = h;
  }
  gen_.apply_offdiagonal(from, k1_);
  base_ = half_.cwiseProduct(from);
  tmp_ = base_ + (0.5 * h) * half_.cwiseProduct(k1_);
  gen_.apply_offdiagonal(tmp_, k2_);
  tmp_ = base_ + (0.5 * h) * k2_;
  gen_.apply_offdiagonal(tmp_, k3_);
  tmp_ = full_.cwiseProduct(from) + h * half_.cwiseProduct(k3_);
  gen_.apply_offdiagonal(tmp_, k4_);
  to = full_.cwiseProduct(from) +
       (h / 6.0) * (full_.cwiseProduct(k1_) + 2.0 * half_.cwiseProduct(k2_ + k3_) + k4_);
}

void Trajectory::rk4_step(const Eigen::VectorXcd& from, Eigen::VectorXcd& to, double h) {
  const int m = std::max(1, static_cast<int>(std::ceil(h * gen_.hopping_bound / 0.5)));
  if (m == 1) {
    if_rk4(from, to, h);
    return;
  }
  const double sub = h / m;
  Eigen::VectorXcd cur = from;
  for (int k = 0; k < m; ++k) {
    if_rk4(cur, to, sub);
    cur.swap(to);
  }
  to.swap(cur);
}

void Trajectory::advance_to(double t) {
  if (aborted_) throw TruncationError("Trajectory: advancing an aborted trajectory");
  if (t < t_) throw std::invalid_argument("Trajectory: cannot advance backwards");
  const double eps = 1e-9 * dt_;
  while (t - t_ > eps) {
    const double remaining = t - t_;
    const double h = remaining <= dt_ * (1.0 + 1e-9) ? remaining : dt_;
    rk4_step(psi_, trial_, h);
    const double nsq = trial_.squaredNorm();
    if (nsq > threshold_) {
      psi_.swap(trial_);
      t_ = h == remaining ? t : t_ + h;
      if (on_step) on_step(t_, nsq);
      continue;
    }
    // The norm crossed the threshold inside this step: bisect for the time.
    double a = 0.0;
    double b = h;
    while (b - a > 1e-6 * dt_) {
      const double mid = 0.5 * (a + b);
      rk4_step(psi_, trial_, mid);
      if (trial_.squaredNorm() > threshold_) {
        a = mid;
      } else {
        b = mid;
      }
    }
    rk4_step(psi_, trial_, b);
    psi_.swap(trial_);
    t_ = b == remaining ? t : t_ + b;
    jump();
  }
  t_ = t;
}

void Trajectory::jump() {
  const auto& m = *model_;
  const int n_max = m.basis.n_max();
  const double gl = m.params.gamma_loss;
  const double gg = m.params.gamma_gain;

  Eigen::VectorXcd y_loss;
  const int loss_lo = std::max(lo_ - 1, 0);
  double w_loss = 0.0;
  if (hi_ >= 1 && gl > 0.0) {
    m.apply_loss(lo_, hi_, psi_, y_loss);
    w_loss = gl * y_loss.squaredNorm();
  }

  Eigen::VectorXcd y_gain;
  const int gain_hi = std::min(hi_ + 1, n_max);
  double w_gain = 0.0;
  if (lo_ < n_max && gg > 0.0) {
    m.apply_gain(lo_, hi_, psi_, y_gain);
    w_gain = gg * y_gain.squaredNorm();
  }

  double w_leak = 0.0;
  if (hi_ == n_max && gg > 0.0) {
    const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(n_max) - offset_);
    for (int j = 0; j <= n_max; ++j) w_leak += gg * (j + 1.0) * std::norm(psi_[b + j]);
  }

  const double total = w_loss + w_gain + w_leak;
  const double u = rng_.uniform() * total;
  if (!(total > 0.0)) {
    aborted_ = true;
    throw TruncationError("no jump channel available at t=" + std::to_string(t_));
  }
  if (u < w_loss) {
    set_window(loss_lo, hi_ - 1);
    psi_ = y_loss / y_loss.norm();
    jumps_.push_back({t_, JumpChannel::Loss});
  } else if (u < w_loss + w_gain) {
    set_window(lo_ + 1, gain_hi);
    psi_ = y_gain / y_gain.norm();
    jumps_.push_back({t_, JumpChannel::Gain});
  } else {
    aborted_ = true;
    std::ostringstream where;
    where << "gain jump at t=" << t_ << " left the basis (n_max=" << n_max << ")";
    throw TruncationError(where.str());
  }
  trim();
  threshold_ = rng_.uniform();
}

void Trajectory::trim() {
  auto shell_norm = [this](int N) {
    const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(N) - offset_);
    const auto e = static_cast<Eigen::Index>(FockBasis::shell_end(N) - offset_);
    return psi_.segment(b, e - b).squaredNorm();
  };
  int lo = lo_;
  int hi = hi_;
  while (lo < hi && shell_norm(lo) == 0.0) ++lo;
  while (hi > lo && shell_norm(hi) == 0.0) --hi;
  if (lo == lo_ && hi == hi_) return;
  const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(lo) - offset_);
  const auto e = static_cast<Eigen::Index>(FockBasis::shell_end(hi) - offset_);
  Eigen::VectorXcd kept = psi_.segment(b, e - b);
  set_window(lo, hi);
  psi_ = std::move(kept);
}

ManyBodyState Trajectory::state() const {
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(model_->basis.dim()));
  full.segment(static_cast<Eigen::Index>(offset_), psi_.size()) = psi_ / psi_.norm();
  return {model_->basis, std::move(full)};
}

TrajectorySample Trajectory::sample() const {
  TrajectorySample s;
  s.t = t_;
  const double nsq = psi_.squaredNorm();
  s.spdm = single_particle_dm(model_->basis, psi_, offset_);
  s.spdm.sigma /= nsq;
  if (hi_ == model_->basis.n_max()) {
    const auto b = static_cast<Eigen::Index>(FockBasis::shell_begin(hi_) - offset_);
    s.top_shell = psi_.tail(psi_.size() - b).squaredNorm() / nsq;
  }
  return s;
}

TrajectoryRecord run_trajectory(const ManyBodyState& psi0, const DimerParams& params,
                                const std::vector<double>& t_grid, std::uint64_t seed, double dt) {
  validate_time_grid(t_grid);
  const JumpModel model(psi0.basis, params);
  Trajectory traj(model, psi0, seed, 0, dt);
  TrajectoryRecord rec;
  for (const double t : t_grid) {
    traj.advance_to(t);
    rec.samples.push_back(traj.sample());
  }
  rec.jumps = traj.jumps();
  return rec;
}

namespace {

struct Stat {
  double mean;
  double se;
};

Stat mean_and_se(const std::vector<double>& x) {
  const auto n = static_cast<double>(x.size());
  if (x.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (const double v : x) sum += v;
  const double mean = sum / n;
  if (x.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

EnsembleSeries ensemble_average(const ManyBodyState& psi0, const DimerParams& params,
                                const std::vector<double>& t_grid, std::size_t n_traj,
                                std::uint64_t seed, const EnsembleOptions& options) {
  validate_time_grid(t_grid);
  if (n_traj < 1) throw std::invalid_argument("ensemble_average: n_traj must be >= 1");
  const int n_max = options.n_max.value_or(psi0.basis.n_max());
  const JumpModel model(FockBasis(n_max), params);

  std::vector<Trajectory> trajs;
  trajs.reserve(n_traj);
  for (std::size_t i = 0; i < n_traj; ++i) trajs.emplace_back(model, psi0, seed, i, options.dt);
  std::vector<TrajectorySample> samples(n_traj);

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_traj)));

  auto advance_range = [&](std::size_t begin, std::size_t end, double t) {
    for (std::size_t i = begin; i < end; ++i) {
      if (trajs[i].aborted()) continue;
      try {
        trajs[i].advance_to(t);
        samples[i] = trajs[i].sample();
      } catch (const TruncationError&) {
        // Recorded through aborted(); reported after the run.
      }
    }
  };

  EnsembleSeries series;
  series.n_traj = n_traj;
  series.seed = seed;
  std::vector<std::string> names{"n1", "n2", "N", "s12_re", "s12_im"};
  if (options.frame) {
    for (const char* n : {"bx", "by", "bz", "bx_n", "by_n", "bz_n"}) names.emplace_back(n);
  }
  for (const auto& n : names) {
    series.mean[n];
    series.se[n];
  }

  for (const double t : t_grid) {
    if (threads == 1) {
      advance_range(0, n_traj, t);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (n_traj + threads - 1) / threads;
      for (unsigned w = 0; w < threads; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n_traj, b + chunk);
        if (b < e) pool.emplace_back(advance_range, b, e, t);
      }
      for (auto& th : pool) th.join();
    }

    std::vector<double> n1, n2, N, re, im, bx, by, bz;
    for (std::size_t i = 0; i < n_traj; ++i) {
      if (trajs[i].aborted()) continue;
      const auto& s = samples[i];
      n1.push_back(s.spdm.sigma(0, 0).real());
      n2.push_back(s.spdm.sigma(1, 1).real());
      N.push_back(s.spdm.total());
      re.push_back(s.spdm.sigma(0, 1).real());
      im.push_back(s.spdm.sigma(0, 1).imag());
      series.max_top_shell = std::max(series.max_top_shell, s.top_shell);
      series.max_N = std::max(series.max_N, N.back());
      if (options.frame) {
        const auto b = bloch_components(s.spdm, *options.frame);
        bx.push_back(b[0]);
        by.push_back(b[1]);
        bz.push_back(b[2]);
      }
    }
    series.t.push_back(t);
    auto put = [&series](const std::string& name, const Stat& s) {
      series.mean[name].push_back(s.mean);
      series.se[name].push_back(s.se);
    };
    const Stat sN = mean_and_se(N);
    put("n1", mean_and_se(n1));
    put("n2", mean_and_se(n2));
    put("N", sN);
    put("s12_re", mean_and_se(re));
    put("s12_im", mean_and_se(im));
    if (options.frame) {
      const std::array<Stat, 3> sb{mean_and_se(bx), mean_and_se(by), mean_and_se(bz)};
      put("bx", sb[0]);
      put("by", sb[1]);
      put("bz", sb[2]);
      const Eigen::Vector3d mb(sb[0].mean, sb[1].mean, sb[2].mean);
      const double len = mb.norm();
      const double scale = len > 0.0 ? sN.mean / len : 0.0;
      put("bx_n", {sb[0].mean * scale, sb[0].se * scale});
      put("by_n", {sb[1].mean * scale, sb[1].se * scale});
      put("bz_n", {sb[2].mean * scale, sb[2].se * scale});
    }
    if (options.stop && options.stop(series)) {
      series.stopped = t != t_grid.back();
      break;
    }
  }

  std::size_t aborted = 0;
  for (const auto& tr : trajs) {
    if (tr.aborted()) ++aborted;
    series.total_jumps += tr.jumps().size();
  }
  if (aborted > 0) {
    std::ostringstream msg;
    msg << aborted << " of " << n_traj << " trajectories left the truncated basis (n_max="
        << n_max << ")";
    throw TruncationError(msg.str(), aborted);
  }
  return series;
}

}  // namespace ptdimer
