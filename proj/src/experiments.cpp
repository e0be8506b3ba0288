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

#include "ptdimer/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ptdimer/errors.hpp"
#include "ptdimer/fock.hpp"
#include "ptdimer/jump.hpp"
#include "ptdimer/lindblad.hpp"
#include "ptdimer/meanfield.hpp"
#include "ptdimer/observables.hpp"
#include "ptdimer/states.hpp"

#ifndef PTDIMER_VERSION
#define PTDIMER_VERSION "unknown"
#endif

namespace ptdimer {

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end || !std::isfinite(x)) {
    throw ConfigError("bad value for " + key + ": '" + v + "'");
  }
  return x;
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& v) {
  Int x = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError("bad value for " + key + ": '" + v + "'");
  return x;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

CsvTable make_table(const ExperimentConfig& cfg, std::vector<std::string> columns) {
  CsvTable t;
  t.comments.push_back(std::string("ptdimer ") + PTDIMER_VERSION + " " + describe(cfg));
  t.columns = std::move(columns);
  return t;
}

DimerParams balanced_params(const ExperimentConfig& cfg) {
  return DimerParams::balanced(cfg.interaction_U(), cfg.gamma, cfg.n0);
}

EnsembleOptions ensemble_options(const ExperimentConfig& cfg) {
  EnsembleOptions o;
  o.dt = cfg.dt;
  o.n_max = cfg.cutoff();
  o.threads = cfg.threads;
  return o;
}

void add_ensemble_footer(CsvTable& table, const EnsembleSeries& s) {
  table.footer.push_back("trajectories=" + std::to_string(s.n_traj) +
                         " jumps=" + std::to_string(s.total_jumps) +
                         " max_top_shell=" + fmt(s.max_top_shell) +
                         " max_trajectory_N=" + fmt(s.max_N));
}

void warn_top_shell(ExperimentResult& r, double p) {
  if (p > 1e-6) {
    r.warnings.push_back("top-shell population reached " + fmt(p) + "; consider a larger nmax");
  }
}

/// Population rows normalized by N0, shared by stationary, pulse and explosion.
void population_cells(std::vector<std::string>& row, const EnsembleSeries& s, std::size_t k,
                      double N0) {
  for (const char* name : {"n1", "n2", "N"}) {
    if (k < s.t.size()) {
      row.push_back(fmt(s.mean_of(name)[k] / N0));
      row.push_back(fmt(s.se_of(name)[k] / N0));
    } else {
      row.emplace_back();
      row.emplace_back();
    }
  }
}

struct PulseRun {
  EnsembleSeries series;
  GpeTrajectory<double> gpe;
};

PulseRun run_pulse(const ExperimentConfig& cfg, const std::vector<double>& grid,
                   const std::function<bool(const EnsembleSeries&)>& stop) {
  const double g = cfg.interaction_g();
  const auto st = stationary_states(g, cfg.gamma);
  const FockBasis basis(cfg.n0);
  const auto c0 = mean_field_superposition(st.ground, st.excited, cfg.theta);
  const auto psi0 = cfg.init == "cat"
                        ? superposition(embed_mean_field(st.ground, cfg.n0, basis),
                                        embed_mean_field(st.excited, cfg.n0, basis), cfg.theta)
                        : embed_mean_field(c0, cfg.n0, basis);
  auto opts = ensemble_options(cfg);
  opts.stop = stop;
  PulseRun r;
  r.series = ensemble_average(psi0, balanced_params(cfg), grid, cfg.n_traj, cfg.seed, opts);
  r.gpe = integrate_gpe(c0, g, cfg.gamma, grid, cfg.dt);
  return r;
}

void gpe_cells(std::vector<std::string>& row, const GpeTrajectory<double>& gpe, std::size_t k) {
  if (k < gpe.states.size()) {
    const auto& c = gpe.states[k];
    row.push_back(fmt(std::norm(c[0])));
    row.push_back(fmt(std::norm(c[1])));
    row.push_back(fmt(c.squaredNorm()));
  } else {
    row.insert(row.end(), 3, std::string());
  }
}

const std::vector<std::string> kPopulationColumns = {"n1", "n1_se", "n2", "n2_se", "N", "N_se"};

}  // namespace

Experiment parse_experiment(const std::string& name) {
  if (name == "spectrum") return Experiment::Spectrum;
  if (name == "stationary") return Experiment::Stationary;
  if (name == "pulse") return Experiment::Pulse;
  if (name == "explosion") return Experiment::Explosion;
  if (name == "bloch") return Experiment::Bloch;
  if (name == "oracle") return Experiment::Oracle;
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Spectrum: return "spectrum";
    case Experiment::Stationary: return "stationary";
    case Experiment::Pulse: return "pulse";
    case Experiment::Explosion: return "explosion";
    case Experiment::Bloch: return "bloch";
    case Experiment::Oracle: return "oracle";
  }
  return "";
}

double ExperimentConfig::interaction_g() const {
  if (U) return macroscopic_g(*U, n0);
  return g.value_or(0.0);
}

double ExperimentConfig::interaction_U() const {
  if (U) return *U;
  return interaction_from_g(g.value_or(0.0), n0);
}

int ExperimentConfig::cutoff() const {
  if (nmax) return *nmax;
  switch (experiment) {
    case Experiment::Explosion: return 50 * n0;
    case Experiment::Oracle: return 8 * n0;
    default: return 10 * n0;
  }
}

void ExperimentConfig::validate() const {
  if (n0 < 1) throw ConfigError("n0 must be >= 1");
  if (!U && g && *g != 0.0 && n0 < 2) throw ConfigError("g != 0 needs n0 >= 2");
  if (cutoff() < n0) throw ConfigError("nmax must be >= n0");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(sample > 0.0)) throw ConfigError("sample must be > 0");
  if (!(t_end > 0.0)) throw ConfigError("tend must be > 0");
  if (n_traj < 1) throw ConfigError("ntraj must be >= 1");
  if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
  if (!(gamma_step > 0.0) || gamma_max < 0.0) throw ConfigError("bad gamma grid");
  if (n_states < 1) throw ConfigError("nstates must be >= 1");
  if (state != "ground" && state != "excited") throw ConfigError("state must be ground|excited");
  if (init != "product" && init != "cat") throw ConfigError("init must be product|cat");
  if (oracle_case != "balanced" && oracle_case != "loss") {
    throw ConfigError("case must be balanced|loss");
  }
  switch (experiment) {
    case Experiment::Stationary:
    case Experiment::Pulse:
    case Experiment::Explosion:
      if (gamma > 2.0) throw ConfigError("gamma must be <= 2 for stationary initial states");
      break;
    case Experiment::Bloch:
      if (gamma >= 2.0) throw ConfigError("bloch needs gamma < 2");
      break;
    default: break;
  }
  if (experiment == Experiment::Explosion && cutoff() < 8 * n0) {
    throw ConfigError("explosion needs nmax >= 8 n0");
  }
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::Spectrum:
      c.g = 0.5;
      break;
    case Experiment::Stationary:
      c.g = 0.5;
      c.gamma = 0.5;
      c.n0 = 200;
      c.n_traj = 2000;
      break;
    case Experiment::Pulse:
      c.g = 0.5;
      c.gamma = 0.5;
      c.n0 = 100;
      c.theta = 0.2;
      break;
    case Experiment::Explosion:
      c.g = 1.0;
      c.gamma = 1.0;
      c.n0 = 100;
      c.theta = 1.4;
      c.t_end = 6.0;
      break;
    case Experiment::Bloch:
      c.g = 0.5;
      c.gamma = 0.1;
      c.n0 = 50;
      c.t_end = 10.0;
      break;
    case Experiment::Oracle:
      c.g = 0.5;
      c.gamma = 0.5;
      c.n0 = 4;
      c.n_traj = 2000;
      break;
  }
  return c;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "experiment") {
    cfg.experiment = parse_experiment(v);
  } else if (key == "g") {
    cfg.g = parse_double(key, v);
    cfg.U.reset();
  } else if (key == "U") {
    cfg.U = parse_double(key, v);
    cfg.g.reset();
  } else if (key == "gamma") {
    cfg.gamma = parse_double(key, v);
  } else if (key == "n0") {
    cfg.n0 = parse_int<int>(key, v);
  } else if (key == "nmax") {
    cfg.nmax = parse_int<int>(key, v);
  } else if (key == "theta") {
    cfg.theta = parse_double(key, v);
  } else if (key == "tend") {
    cfg.t_end = parse_double(key, v);
  } else if (key == "dt") {
    cfg.dt = parse_double(key, v);
  } else if (key == "sample") {
    cfg.sample = parse_double(key, v);
  } else if (key == "ntraj") {
    cfg.n_traj = parse_int<std::size_t>(key, v);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(key, v);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "state") {
    cfg.state = v;
  } else if (key == "nstates") {
    cfg.n_states = parse_int<int>(key, v);
  } else if (key == "init") {
    cfg.init = v;
  } else if (key == "case") {
    cfg.oracle_case = v;
  } else if (key == "threads") {
    cfg.threads = parse_int<unsigned>(key, v);
  } else if (key == "gamma_max") {
    cfg.gamma_max = parse_double(key, v);
  } else if (key == "gamma_step") {
    cfg.gamma_step = parse_double(key, v);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

std::string describe(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "experiment=" << experiment_name(cfg.experiment) << " g=" << fmt(cfg.interaction_g())
     << " U=" << fmt(cfg.interaction_U()) << " gamma=" << fmt(cfg.gamma) << " n0=" << cfg.n0
     << " nmax=" << cfg.cutoff() << " theta=" << fmt(cfg.theta) << " tend=" << fmt(cfg.t_end)
     << " dt=" << fmt(cfg.dt) << " sample=" << fmt(cfg.sample) << " ntraj=" << cfg.n_traj
     << " seed=" << cfg.seed << " state=" << cfg.state << " init=" << cfg.init
     << " nstates=" << cfg.n_states
     << " case=" << cfg.oracle_case << " gamma_max=" << fmt(cfg.gamma_max)
     << " gamma_step=" << fmt(cfg.gamma_step);
  return os.str();
}

void CsvTable::write(std::ostream& os) const {
  for (const auto& c : comments) os << "# " << c << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  for (const auto& f : footer) os << "# " << f << '\n';
}

std::size_t CsvTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
  const auto j = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const std::string& cell = row.at(j);
    out.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(cell));
  }
  return out;
}

std::vector<std::string> CsvTable::text(const std::string& name) const {
  const auto j = column_index(name);
  std::vector<std::string> out;
  for (const auto& row : rows) out.push_back(row.at(j));
  return out;
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.rfind("# ", 0) == 0) {
      (header ? t.footer : t.comments).push_back(line.substr(2));
    } else if (!header) {
      t.columns = split(line, ',');
      header = true;
    } else if (!line.empty()) {
      t.rows.push_back(split(line, ','));
    }
  }
  return t;
}

std::vector<double> sample_grid(double t_end, double sample) {
  const auto n = static_cast<std::size_t>(std::llround(t_end / sample));
  std::vector<double> grid;
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(std::min(t_end, k * sample));
  if (grid.back() < t_end * (1.0 - 1e-12)) grid.push_back(t_end);
  return grid;
}

double discrepancy_in_se(double reference, double mean, double se, double abs_tol) {
  const double diff = std::abs(mean - reference);
  if (diff <= abs_tol) return 0.0;
  if (se <= 0.0) return std::numeric_limits<double>::infinity();
  return diff / se;
}

ExperimentResult cmd_spectrum(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.table = make_table(cfg, {"gamma", "branch", "mu_re", "mu_im"});
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor(cfg.gamma_max / cfg.gamma_step + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) grid.push_back(k * cfg.gamma_step);
  for (const auto& p : spectrum(cfg.interaction_g(), grid)) {
    r.table.rows.push_back({fmt(p.gamma), std::string(branch_name(p.branch)), fmt(p.mu.real()),
                            fmt(p.mu.imag())});
  }
  return r;
}

ExperimentResult cmd_stationary(const ExperimentConfig& cfg) {
  ExperimentResult r;
  auto cols = kPopulationColumns;
  cols.insert(cols.begin(), "t");
  r.table = make_table(cfg, cols);
  const auto st = stationary_states(cfg.interaction_g(), cfg.gamma);
  const FockBasis basis(cfg.n0);
  const auto psi0 =
      embed_mean_field(cfg.state == "ground" ? st.ground : st.excited, cfg.n0, basis);
  const auto grid = sample_grid(cfg.t_end, cfg.sample);
  const auto s = ensemble_average(psi0, balanced_params(cfg), grid, cfg.n_traj, cfg.seed,
                                  ensemble_options(cfg));
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    std::vector<std::string> row{fmt(s.t[k])};
    population_cells(row, s, k, cfg.n0);
    r.table.rows.push_back(std::move(row));
  }
  add_ensemble_footer(r.table, s);
  warn_top_shell(r, s.max_top_shell);
  return r;
}

ExperimentResult cmd_pulse(const ExperimentConfig& cfg) {
  ExperimentResult r;
  auto cols = kPopulationColumns;
  cols.insert(cols.begin(), "t");
  cols.insert(cols.end(), {"gpe_n1", "gpe_n2", "gpe_N"});
  r.table = make_table(cfg, cols);
  const auto grid = sample_grid(cfg.t_end, cfg.sample);
  const auto run = run_pulse(cfg, grid, {});
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<std::string> row{fmt(grid[k])};
    population_cells(row, run.series, k, cfg.n0);
    gpe_cells(row, run.gpe, k);
    r.table.rows.push_back(std::move(row));
  }
  add_ensemble_footer(r.table, run.series);
  warn_top_shell(r, run.series.max_top_shell);
  return r;
}

ExperimentResult cmd_explosion(const ExperimentConfig& cfg) {
  constexpr double kThreshold = 5.0;
  ExperimentResult r;
  auto cols = kPopulationColumns;
  cols.insert(cols.begin(), "t");
  cols.insert(cols.end(), {"gpe_n1", "gpe_n2", "gpe_N"});
  r.table = make_table(cfg, cols);
  const auto grid = sample_grid(cfg.t_end, cfg.sample);
  const double limit = kThreshold * cfg.n0;
  const auto run = run_pulse(cfg, grid, [limit](const EnsembleSeries& s) {
    return s.mean_of("N").back() > limit;
  });
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<std::string> row{fmt(grid[k])};
    population_cells(row, run.series, k, cfg.n0);
    gpe_cells(row, run.gpe, k);
    r.table.rows.push_back(std::move(row));
  }
  std::string jump_t = "none";
  const auto& N = run.series.mean_of("N");
  for (std::size_t k = 0; k < N.size(); ++k) {
    if (N[k] > limit) {
      jump_t = fmt(run.series.t[k]);
      break;
    }
  }
  std::string gpe_t = "none";
  for (std::size_t k = 0; k < run.gpe.states.size(); ++k) {
    if (run.gpe.states[k].squaredNorm() > kThreshold) {
      gpe_t = fmt(run.gpe.t[k]);
      break;
    }
  }
  if (gpe_t == "none" && run.gpe.diverged) gpe_t = fmt(run.gpe.divergence_time);
  add_ensemble_footer(r.table, run.series);
  r.table.footer.push_back("divergence threshold=" + fmt(kThreshold) + " jump_t=" + jump_t +
                           " gpe_t=" + gpe_t);
  warn_top_shell(r, run.series.max_top_shell);
  return r;
}

ExperimentResult cmd_bloch(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.table = make_table(cfg, {"t", "state", "polar", "bx", "bx_se", "by", "by_se", "bz", "bz_se",
                             "N", "N_se", "gpe_bx", "gpe_by", "gpe_bz", "gpe_N"});
  const double g = cfg.interaction_g();
  const auto frame = bloch_frame(g, cfg.gamma);
  const FockBasis basis(cfg.n0);
  const auto params = balanced_params(cfg);
  const auto grid = sample_grid(cfg.t_end, cfg.sample);
  auto opts = ensemble_options(cfg);
  opts.frame = frame;
  double top = 0.0;
  std::size_t jumps = 0;
  for (int j = 0; j < cfg.n_states; ++j) {
    const double polar = 2.0 * std::numbers::pi * j / cfg.n_states;
    const auto c0 = great_circle_state(frame.e1, frame.e2, polar);
    const auto s = ensemble_average(embed_mean_field(c0, cfg.n0, basis), params, grid, cfg.n_traj,
                                    cfg.seed + static_cast<std::uint64_t>(j), opts);
    const auto gpe = integrate_gpe(c0, g, cfg.gamma, grid, cfg.dt);
    top = std::max(top, s.max_top_shell);
    jumps += s.total_jumps;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<std::string> row{fmt(grid[k]), std::to_string(j), fmt(polar)};
      for (const char* name : {"bx_n", "by_n", "bz_n", "N"}) {
        row.push_back(fmt(s.mean_of(name)[k]));
        row.push_back(fmt(s.se_of(name)[k]));
      }
      if (k < gpe.states.size()) {
        const auto b = bloch_vector_mf(gpe.states[k], cfg.n0, frame);
        for (int a = 0; a < 3; ++a) row.push_back(fmt(b.normalized_b[a]));
        row.push_back(fmt(b.N_mean));
      } else {
        row.insert(row.end(), 4, std::string());
      }
      r.table.rows.push_back(std::move(row));
    }
  }
  r.table.footer.push_back("states=" + std::to_string(cfg.n_states) + " trajectories_per_state=" +
                           std::to_string(cfg.n_traj) + " jumps=" + std::to_string(jumps) +
                           " max_top_shell=" + fmt(top));
  warn_top_shell(r, top);
  return r;
}

namespace {

ExperimentResult oracle_balanced(const ExperimentConfig& cfg) {
  ExperimentResult r;
  const std::vector<std::string> names = {"n1", "n2", "s12_re", "s12_im"};
  std::vector<std::string> cols{"t"};
  for (const auto& n : names) cols.insert(cols.end(), {n + "_me", n + "_jump", n + "_jump_se"});
  cols.push_back("max_z");
  r.table = make_table(cfg, cols);

  const double g = cfg.interaction_g();
  const auto params = balanced_params(cfg);
  const FockBasis basis(cfg.cutoff());
  const auto psi0 = embed_mean_field(stationary_states(g, cfg.gamma).ground, cfg.n0, basis);
  const auto grid = sample_grid(cfg.t_end, cfg.sample);
  std::vector<Eigen::Matrix2cd> reference;
  MasterOptions mo;
  mo.dt = cfg.dt;
  mo.keep_states = false;
  mo.observer = [&reference](double, const DensityMatrix& rho) {
    reference.push_back(single_particle_dm(rho).sigma);
  };
  const auto me = integrate_master(DensityMatrix::pure(psi0),
                                   hamiltonian(basis, params.U, params.hopping), params, grid, mo);
  const auto s = ensemble_average(psi0, params, grid, cfg.n_traj, cfg.seed, ensemble_options(cfg));

  double worst = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& sigma = reference[k];
    const double ref[] = {sigma(0, 0).real(), sigma(1, 1).real(), sigma(0, 1).real(),
                          sigma(0, 1).imag()};
    std::vector<std::string> row{fmt(grid[k])};
    double row_z = 0.0;
    for (std::size_t q = 0; q < names.size(); ++q) {
      const double m = s.mean_of(names[q])[k];
      const double e = s.se_of(names[q])[k];
      row_z = std::max(row_z, discrepancy_in_se(ref[q], m, e));
      row.insert(row.end(), {fmt(ref[q]), fmt(m), fmt(e)});
    }
    row.push_back(fmt(row_z));
    worst = std::max(worst, row_z);
    r.table.rows.push_back(std::move(row));
  }
  add_ensemble_footer(r.table, s);
  r.table.footer.push_back("master_max_top_shell=" + fmt(me.max_top_shell) +
                           " max_discrepancy_se=" + fmt(worst));
  warn_top_shell(r, std::max(s.max_top_shell, me.max_top_shell));
  if (worst > 3.0) r.exit_code = 3;
  return r;
}

ExperimentResult oracle_loss(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.table = make_table(cfg, {"t", "exact", "N_me", "N_jump", "N_jump_se", "me_rel_err", "jump_z"});
  DimerParams params;
  params.N0 = cfg.n0;
  params.gamma_loss = cfg.gamma;
  params.hopping = 0.0;
  const FockBasis basis(cfg.n0);
  const auto psi0 = ManyBodyState::fock(basis, cfg.n0, 0);
  const auto grid = sample_grid(cfg.t_end, cfg.sample);
  MasterOptions mo;
  mo.dt = cfg.dt;
  const auto me =
      integrate_master(DensityMatrix::pure(psi0), hamiltonian(basis, 0.0, 0.0), params, grid, mo);
  const auto s = ensemble_average(psi0, params, grid, cfg.n_traj, cfg.seed, ensemble_options(cfg));
  double worst_rel = 0.0;
  double worst_z = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double exact = single_site_loss_N(cfg.n0, cfg.gamma, grid[k]);
    const double n_me = single_particle_dm(me.states[k]).total();
    const double rel = std::abs(n_me - exact) / std::max(exact, 1e-300);
    const double z = discrepancy_in_se(exact, s.mean_of("N")[k], s.se_of("N")[k]);
    worst_rel = std::max(worst_rel, rel);
    worst_z = std::max(worst_z, z);
    r.table.rows.push_back({fmt(grid[k]), fmt(exact), fmt(n_me), fmt(s.mean_of("N")[k]),
                            fmt(s.se_of("N")[k]), fmt(rel), fmt(z)});
  }
  add_ensemble_footer(r.table, s);
  r.table.footer.push_back("max_master_rel_err=" + fmt(worst_rel) +
                           " max_discrepancy_se=" + fmt(worst_z));
  if (worst_rel > 1e-6 || worst_z > 3.0) r.exit_code = 3;
  return r;
}

}  // namespace

ExperimentResult cmd_oracle(const ExperimentConfig& cfg) {
  return cfg.oracle_case == "loss" ? oracle_loss(cfg) : oracle_balanced(cfg);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.experiment) {
    case Experiment::Spectrum: return cmd_spectrum(cfg);
    case Experiment::Stationary: return cmd_stationary(cfg);
    case Experiment::Pulse: return cmd_pulse(cfg);
    case Experiment::Explosion: return cmd_explosion(cfg);
    case Experiment::Bloch: return cmd_bloch(cfg);
    case Experiment::Oracle: return cmd_oracle(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace ptdimer
