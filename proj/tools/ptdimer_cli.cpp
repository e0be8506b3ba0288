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

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ptdimer/errors.hpp"
#include "ptdimer/experiments.hpp"

namespace {

// Flag name -> config key.
const std::pair<const char*, const char*> kFlags[] = {
    {"--g", "g"},         {"--U", "U"},           {"--gamma", "gamma"},
    {"--n0", "n0"},       {"--nmax", "nmax"},     {"--theta", "theta"},
    {"--tend", "tend"},   {"--dt", "dt"},         {"--ntraj", "ntraj"},
    {"--seed", "seed"},   {"--out", "out"},       {"--sample", "sample"},
    {"--state", "state"}, {"--nstates", "nstates"}, {"--case", "case"}, {"--init", "init"},
    {"--threads", "threads"}, {"--gamma-max", "gamma_max"}, {"--gamma-step", "gamma_step"},
};

const char* kHelp[] = {
    "macroscopic interaction g = (N0-1) U",
    "on-site interaction U (overrides g)",
    "loss rate on site 1; gain is balanced",
    "initial particle number N0",
    "Fock cutoff on the total particle number",
    "mixing angle of the initial superposition",
    "final time",
    "integration step",
    "number of trajectories",
    "random seed",
    "output CSV path, - for stdout",
    "spacing of output rows",
    "stationary: ground or excited",
    "bloch: number of initial states",
    "oracle: balanced or loss",
    "pulse/explosion initial state: product or cat",
    "worker threads, 0 for all cores",
    "spectrum: largest gamma",
    "spectrum: gamma spacing",
};

int run(const ptdimer::ExperimentConfig& cfg) {
  const auto result = ptdimer::run_experiment(cfg);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  if (cfg.out == "-") {
    result.table.write(std::cout);
  } else {
    std::ofstream os(cfg.out, std::ios::binary);
    if (!os) throw ptdimer::ConfigError("cannot open " + cfg.out);
    result.table.write(os);
  }
  if (result.exit_code == 3) std::cerr << "oracle mismatch: " << result.table.footer.back() << '\n';
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Hubbard dimer with balanced gain and loss"};
  app.require_subcommand(1);
  std::map<std::string, std::string> values;
  std::string config_path;
  const char* names[] = {"spectrum", "stationary", "pulse", "explosion", "bloch", "oracle"};
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "key=value config file");
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
      sub->add_option(kFlags[i].first, values[kFlags[i].second], kHelp[i]);
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    auto cfg = ptdimer::default_config(ptdimer::parse_experiment(sub->get_name()));
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ptdimer::ConfigError("cannot read config " + config_path);
      std::stringstream ss;
      ss << is.rdbuf();
      ptdimer::apply_config_text(cfg, ss.str());
      cfg.experiment = ptdimer::parse_experiment(sub->get_name());
    }
    for (const auto& [flag, key] : kFlags) {
      if (sub->count(flag) > 0) ptdimer::apply_setting(cfg, key, values[key]);
    }
    cfg.validate();
    return run(cfg);
  } catch (const ptdimer::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ptdimer::PhysicsError& e) {
    std::cerr << "physics failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
