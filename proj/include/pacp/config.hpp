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

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "pacp/channel.hpp"

namespace pacp {

enum class PriorityMode { kLiteral, kNormalized };

NLOHMANN_JSON_SERIALIZE_ENUM(PriorityMode,
                             {{PriorityMode::kLiteral, "literal"},
                              {PriorityMode::kNormalized, "normalized"}})

/// Every tunable of a scenario and of the solver. Defaults follow the
/// highway evaluation setup; fields absent from a config file keep them.
struct ScenarioConfig {
  // Road and traffic.
  int num_vehicles = 10;
  int lanes = 6;
  double lane_width_m = 3.5;
  double road_length_m = 200.0;
  double min_gap_m = 6.0;
  double speed_min_kmh = 0.0;
  double speed_max_kmh = 50.0;
  int ego_index = 0;

  // Per-vehicle resources.
  double local_rate_bps = 40e6;
  double cpu_min_hz = 1e9;
  double cpu_max_hz = 3e9;
  double beta_cycles_per_bit = 10.0;

  // Radio.
  int num_subchannels = 4;
  double bandwidth_hz = 200e6;
  double tx_power_w = 8e-3;
  double noise_offset_db = 0.0;
  double pathloss_exponent = 3.0;
  double reference_gain = 1e-3;
  double comm_range_m = 150.0;
  double shadowing_sigma_db = 0.0;

  // Energy.
  double energy_budget_j = 1000.0;
  double tau_t_s = 0.1;
  double tau_c_s = 0.1;
  double energy_per_bit_j = 1e-7;

  // Utility and compression.
  double omega1 = 1e-2;
  double omega2 = 1e-3;
  double eta = 1.0;
  double r_min = 0.3;
  double r_max = 0.95;

  // Perception.
  double perception_radius_m = 40.0;
  double object_density_per_m = 0.05;
  double bev_cell_m = 0.4;
  double bev_extent_m = 80.0;
  double bev_noise_rate = 0.005;
  /// Scales the fraction of occupied BEV cells lost at a given compression
  /// ratio (see compression_loss_rate).
  double compression_loss = 1.0;
  PriorityMode priority_mode = PriorityMode::kNormalized;
  double gate_threshold = 0.05;
  double coverage_cell_m = 0.5;

  // Solver.
  bool ego_only = false;
  bool refresh_priorities = true;
  int max_iterations = 50;
  double rel_tol = 1e-6;

  std::uint64_t seed = 1;

  ChannelParams channel() const {
    ChannelParams c;
    c.bandwidth_hz = bandwidth_hz;
    c.num_subchannels = num_subchannels;
    c.tx_power_w = tx_power_w;
    c.noise_offset_db = noise_offset_db;
    c.pathloss_exponent = pathloss_exponent;
    c.reference_gain = reference_gain;
    c.comm_range_m = comm_range_m;
    c.shadowing_sigma_db = shadowing_sigma_db;
    c.shadowing_seed = seed;
    return c;
  }

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(std::string("config: ") + what);
    };
    require(num_vehicles >= 1, "num_vehicles must be >= 1");
    require(lanes >= 1, "lanes must be >= 1");
    require(lane_width_m > 0.0, "lane_width_m must be > 0");
    require(road_length_m > 0.0, "road_length_m must be > 0");
    require(min_gap_m > 0.0, "min_gap_m must be > 0");
    require(0.0 <= speed_min_kmh && speed_min_kmh <= speed_max_kmh,
            "speed range invalid");
    require(ego_index >= 0 && ego_index < num_vehicles, "ego_index range");
    require(local_rate_bps > 0.0, "local_rate_bps must be > 0");
    require(0.0 < cpu_min_hz && cpu_min_hz <= cpu_max_hz, "cpu range invalid");
    require(beta_cycles_per_bit > 0.0, "beta must be > 0");
    require(energy_budget_j > 0.0, "energy_budget_j must be > 0");
    require(tau_t_s > 0.0 && tau_c_s > 0.0, "tau must be > 0");
    require(energy_per_bit_j > 0.0, "energy_per_bit_j must be > 0");
    require(omega1 >= 0.0 && omega2 >= 0.0, "omega must be >= 0");
    require(0.0 < eta && eta <= 1.0, "eta must be in (0, 1]");
    require(0.0 < r_min && r_min <= r_max && r_max <= 1.0,
            "need 0 < r_min <= r_max <= 1");
    require(perception_radius_m > 0.0, "perception radius must be > 0");
    require(object_density_per_m >= 0.0, "object density must be >= 0");
    require(bev_cell_m > 0.0 && bev_extent_m >= bev_cell_m, "bev grid");
    require(bev_extent_m >= 2.0 * perception_radius_m,
            "bev_extent_m must cover the perception radius");
    require(bev_noise_rate >= 0.0 && bev_noise_rate <= 1.0, "bev noise");
    require(compression_loss >= 0.0, "compression_loss must be >= 0");
    require(gate_threshold >= 0.0, "gate_threshold must be >= 0");
    require(coverage_cell_m > 0.0, "coverage_cell_m must be > 0");
    require(max_iterations >= 1, "max_iterations must be >= 1");
    require(rel_tol > 0.0, "rel_tol must be > 0");
    channel().validate();
  }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(
    ScenarioConfig, num_vehicles, lanes, lane_width_m, road_length_m,
    min_gap_m, speed_min_kmh, speed_max_kmh, ego_index, local_rate_bps,
    cpu_min_hz, cpu_max_hz, beta_cycles_per_bit, num_subchannels,
    bandwidth_hz, tx_power_w, noise_offset_db, pathloss_exponent,
    reference_gain, comm_range_m, shadowing_sigma_db, energy_budget_j, tau_t_s,
    tau_c_s, energy_per_bit_j, omega1, omega2, eta, r_min, r_max,
    perception_radius_m, object_density_per_m, bev_cell_m, bev_extent_m,
    bev_noise_rate, compression_loss, priority_mode, gate_threshold,
    coverage_cell_m, ego_only, refresh_priorities, max_iterations, rel_tol,
    seed)

/// Parses a config object. Unknown keys are rejected so that typos do not
/// silently fall back to defaults.
inline ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected object");
  const nlohmann::json known = ScenarioConfig{};
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw std::invalid_argument("config: unknown field '" + item.key() +
                                  "'");
    }
  }
  ScenarioConfig cfg;
  try {
    cfg = j.get<ScenarioConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path + ": " +
                                e.what());
  }
  return config_from_json(j);
}

/// Overrides one field given as text, e.g. ("tx_power_w", "0.011").
inline void set_config_field(ScenarioConfig& cfg, const std::string& key,
                             const std::string& value) {
  nlohmann::json j = cfg;
  if (!j.contains(key)) {
    throw std::invalid_argument("config: unknown field '" + key + "'");
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(value);
  } catch (const nlohmann::json::parse_error&) {
    parsed = value;  // bare strings such as priority_mode=normalized
  }
  j[key] = parsed;
  cfg = config_from_json(j);
}

}  // namespace pacp
