// Copyright 2026 The pacp-sim Authors
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

// Command-line driver: single runs, parameter sweeps and the greedy vs.
// exhaustive oracle comparison.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pacp/pacp.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::vector<std::string> sets;
  std::string out = ".";
};

// Precedence: defaults < config file < --set < --seed.
pacp::ScenarioConfig load(const CommonOptions& o) {
  pacp::ScenarioConfig cfg;
  if (!o.config.empty()) cfg = pacp::load_config(o.config);
  for (const std::string& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    }
    pacp::set_config_field(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw std::invalid_argument("bad value '" + item + "' in --values");
    }
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("--values is empty");
  return out;
}

void append_record(const fs::path& path, const pacp::RunRecord& rec) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  if (fresh) f << pacp::kCsvHeader << '\n';
  f << pacp::csv_row(rec) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

int cmd_run(const CommonOptions& o, const std::string& scheme_name,
            std::optional<std::uint64_t> seed, bool timing, bool dump_bev) {
  pacp::ScenarioConfig cfg = load(o);
  if (seed) cfg.seed = *seed;
  const pacp::Scheme scheme = pacp::parse_scheme(scheme_name);
  const pacp::PreparedScenario prep = pacp::prepare_scenario(cfg);
  const pacp::RunRecord rec = pacp::run_prepared(prep, cfg, scheme, timing);
  fs::create_directories(o.out);
  append_record(fs::path(o.out) / "runs.csv", rec);
  if (dump_bev) {
    for (std::size_t k = 0; k < prep.views.size(); ++k) {
      pacp::write_file(fs::path(o.out) / ("bev_" + std::to_string(k) + ".pgm"),
                       pacp::bev_pgm(prep.views[k].grid));
    }
  }
  std::cout << pacp::kCsvHeader << '\n' << pacp::csv_row(rec) << '\n';
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& param,
              const std::string& values, int seeds,
              const std::vector<std::string>& schemes, unsigned jobs,
              bool timing) {
  const pacp::ScenarioConfig cfg = load(o);
  pacp::SweepSpec spec;
  spec.param = param;
  pacp::sweep_axis(param);
  spec.values = parse_values(values);
  spec.seeds = seeds;
  for (const auto& s : schemes) spec.schemes.push_back(pacp::parse_scheme(s));
  spec.jobs = jobs;
  spec.timing = timing;
  const auto records = pacp::sweep(cfg, spec);
  fs::create_directories(o.out);
  const fs::path out(o.out);
  pacp::write_file(out / ("sweep_" + param + ".csv"),
                   pacp::records_csv(records));
  pacp::write_file(out / ("means_" + param + ".csv"),
                   pacp::means_csv(records));
  pacp::emit_plotdata(records, out);
  std::cout << pacp::means_csv(records);
  return 0;
}

int cmd_oracle(int max_n, int instances, std::uint64_t seed) {
  int violations = 0;
  double worst = 1.0;
  for (int k = 0; k < instances; ++k) {
    const pacp::OracleInstance oi =
        pacp::oracle_instance(seed + static_cast<std::uint64_t>(k), max_n, 3);
    const pacp::LinkSet g =
        pacp::greedy_links(oi.inst, oi.candidates, oi.rates, oi.priorities);
    const double greedy =
        pacp::utility(oi.inst, g, oi.rates.d, oi.priorities);
    const double opt = pacp::brute_force_utility_opt(
                           oi.inst, oi.candidates, oi.rates, oi.priorities)
                           .second;
    const double ratio = opt > 0.0 ? greedy / opt : 1.0;
    worst = std::min(worst, ratio);
    if (greedy < (1.0 - 1.0 / std::exp(1.0)) * opt) ++violations;
  }
  std::printf("instances=%d max_n=%d worst_ratio=%.6f violations=%d\n",
              instances, max_n, worst, violations);
  return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Priority-aware collaborative perception simulator"};
  app.require_subcommand(1);

  CommonOptions common;
  auto add_common = [&common](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", common.sets,
                    "Override a config field, key=value (repeatable)");
    sub->add_option("--out", common.out, "Output directory");
  };

  CLI::App* run = app.add_subcommand("run", "Evaluate one scheme on one seed");
  add_common(run);
  std::string scheme = "pacp";
  std::optional<std::uint64_t> seed;
  bool timing = false;
  bool dump_bev = false;
  run->add_option("--scheme", scheme, "pacp | fts | dmdda | nofusion");
  run->add_option("--seed", seed, "Scenario seed (overrides config)");
  run->add_flag("--timing", timing, "Record wall time (breaks byte equality)");
  run->add_flag("--dump-bev", dump_bev, "Write every BEV raster as PGM");

  CLI::App* sw = app.add_subcommand("sweep", "Sweep one parameter");
  add_common(sw);
  std::string param;
  std::string values;
  int seeds = 1;
  std::vector<std::string> schemes = {"pacp", "dmdda", "fts", "nofusion"};
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  sw->add_option("--param", param,
                 "tx_power (mW) | bandwidth (MHz) | num_cavs | max_range (m) "
                 "| noise_offset (dB) | energy_budget (J)")
      ->required();
  sw->add_option("--values", values, "Comma-separated values")->required();
  sw->add_option("--seeds", seeds, "Number of seeds, from the config seed")
      ->check(CLI::PositiveNumber);
  sw->add_option("--schemes", schemes, "Schemes to compare")->delimiter(',');
  sw->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  sw->add_flag("--timing", timing, "Record wall time");

  CLI::App* oracle =
      app.add_subcommand("oracle", "Greedy vs. exhaustive search");
  int max_n = 5;
  int instances = 200;
  std::uint64_t oracle_seed = 1;
  oracle->add_option("--max-n", max_n, "Largest vehicle count")
      ->check(CLI::Range(1, 5));
  oracle->add_option("--instances", instances, "Number of random instances")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oracle_seed, "First instance seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(common, scheme, seed, timing, dump_bev);
    if (sw->parsed()) {
      return cmd_sweep(common, param, values, seeds, schemes, jobs, timing);
    }
    if (oracle->parsed()) return cmd_oracle(max_n, instances, oracle_seed);
  } catch (const pacp::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
