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
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptdimer {

/// Bad configuration or command line; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { Spectrum, Stationary, Pulse, Explosion, Bloch, Oracle };

Experiment parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

/// Settings of one run.  Every field can be set from a key=value config
/// file and overridden on the command line.
struct ExperimentConfig {
  Experiment experiment = Experiment::Spectrum;
  /// Exactly one of g and U is authoritative; setting one clears the other.
  std::optional<double> g;
  std::optional<double> U;
  double gamma = 0.5;
  int n0 = 100;
  std::optional<int> nmax;
  double theta = 0.2;
  double t_end = 5.0;
  double dt = 1e-3;
  /// Spacing of output rows.
  double sample = 0.1;
  std::size_t n_traj = 500;
  std::uint64_t seed = 20140601;
  std::string out = "-";
  /// stationary: ground | excited
  std::string state = "ground";
  /// pulse, explosion: product embeds cos(theta) c_g + sin(theta) c_e;
  /// cat superposes the embedded many-body states.
  std::string init = "product";
  /// bloch: number of initial states on the xz great circle
  int n_states = 16;
  /// oracle: balanced | loss
  std::string oracle_case = "balanced";
  unsigned threads = 0;
  double gamma_max = 3.0;
  double gamma_step = 1e-3;

  double interaction_g() const;
  double interaction_U() const;
  int cutoff() const;
  void validate() const;
};

/// Default settings for each experiment.
ExperimentConfig default_config(Experiment e);

/// Apply one key=value setting; throws ConfigError for unknown keys or
/// unparsable values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Apply a config file body: one key=value per line, '#' starts a comment.
void apply_config_text(ExperimentConfig& cfg, const std::string& text);

/// Single-line description of every setting, used in CSV headers.
std::string describe(const ExperimentConfig& cfg);

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> footer;

  void write(std::ostream& os) const;
  std::size_t column_index(const std::string& name) const;
  /// Numeric column; empty cells read as NaN.
  std::vector<double> numeric(const std::string& name) const;
  std::vector<std::string> text(const std::string& name) const;
};

/// Parse a table produced by CsvTable::write.
CsvTable read_csv(std::istream& is);

struct ExperimentResult {
  CsvTable table;
  /// 0 success, 3 oracle mismatch.  Physics failures are thrown.
  int exit_code = 0;
  std::vector<std::string> warnings;
};

ExperimentResult cmd_spectrum(const ExperimentConfig& cfg);
ExperimentResult cmd_stationary(const ExperimentConfig& cfg);
ExperimentResult cmd_pulse(const ExperimentConfig& cfg);
ExperimentResult cmd_explosion(const ExperimentConfig& cfg);
ExperimentResult cmd_bloch(const ExperimentConfig& cfg);
ExperimentResult cmd_oracle(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Output rows at 0, sample, 2 sample, ..., t_end.
std::vector<double> sample_grid(double t_end, double sample);

/// Discrepancy between a reference value and an ensemble mean in units of
/// the standard error; differences up to abs_tol count as zero.
double discrepancy_in_se(double reference, double mean, double se, double abs_tol = 1e-6);

}  // namespace ptdimer
