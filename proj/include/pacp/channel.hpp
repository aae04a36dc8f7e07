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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>

#include "pacp/geometry.hpp"
#include "pacp/matrix.hpp"
#include "pacp/rng.hpp"

namespace pacp {

/// Thermal noise floor, dBm/Hz.
inline constexpr double kThermalNoiseDbmPerHz = -174.0;

/// OFDM link-budget parameters shared by every directed pair.
struct ChannelParams {
  double bandwidth_hz = 200e6;
  int num_subchannels = 4;
  double tx_power_w = 8e-3;
  /// Noise floor raise above -174 dBm/Hz (0 / 4 / 8 dB = low / medium /
  /// high interference).
  double noise_offset_db = 0.0;
  double pathloss_exponent = 3.0;
  /// Power gain at the 1 m reference distance.
  double reference_gain = 1e-3;
  double comm_range_m = 150.0;
  /// Log-normal shadowing standard deviation; 0 disables shadowing.
  double shadowing_sigma_db = 0.0;
  std::uint64_t shadowing_seed = 0;

  /// Effective noise power spectral density in W/Hz.
  double noise_psd() const {
    return std::pow(10.0, (kThermalNoiseDbmPerHz + noise_offset_db) / 10.0) *
           1e-3;
  }
  double subchannel_bandwidth() const { return bandwidth_hz / num_subchannels; }

  void validate() const {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth <= 0");
    if (num_subchannels < 1) throw std::invalid_argument("num_subchannels < 1");
    if (!(tx_power_w > 0.0)) throw std::invalid_argument("tx_power <= 0");
    if (!(pathloss_exponent >= 2.0)) {
      throw std::invalid_argument("pathloss_exponent < 2");
    }
    if (!(reference_gain > 0.0)) throw std::invalid_argument("gain <= 0");
    if (!(comm_range_m > 0.0)) throw std::invalid_argument("range <= 0");
    if (!std::isfinite(noise_offset_db)) {
      throw std::invalid_argument("noise offset not finite");
    }
    if (shadowing_sigma_db < 0.0) throw std::invalid_argument("sigma < 0");
  }
};

/// Log-distance path gain g0 * d^-alpha.
inline double path_gain(double distance_m, const ChannelParams& params) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw std::invalid_argument("path_gain: distance must be positive");
  }
  return params.reference_gain *
         std::pow(distance_m, -params.pathloss_exponent);
}

/// Shannon capacity of one subchannel, bits/s.
inline double subchannel_capacity(double gain, const ChannelParams& params) {
  if (gain <= 0.0) return 0.0;
  const double bw = params.subchannel_bandwidth();
  const double snr = params.tx_power_w * gain / (params.noise_psd() * bw);
  return bw * std::log2(1.0 + snr);
}

/// Shadowing multiplier for the unordered pair {i, j}.
inline double shadowing_factor(std::size_t i, std::size_t j,
                               const ChannelParams& params) {
  if (params.shadowing_sigma_db <= 0.0) return 1.0;
  const std::uint64_t a = std::min(i, j), b = std::max(i, j);
  const double u1 = std::max(
      unit_from_bits(hash_key({params.shadowing_seed, a, b, 1})), 1e-300);
  const double u2 = unit_from_bits(hash_key({params.shadowing_seed, a, b, 2}));
  const double z = std::sqrt(-2.0 * std::log(u1)) *
                   std::cos(2.0 * std::numbers::pi * u2);
  return std::pow(10.0, params.shadowing_sigma_db * z / 10.0);
}

/// Gain for every ordered pair; zero on the diagonal and beyond range.
inline SquareMatrix gain_matrix(std::span<const Point2> positions,
                                const ChannelParams& params) {
  params.validate();
  const std::size_t n = positions.size();
  SquareMatrix h(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(positions[i].x - positions[j].x,
                                  positions[i].y - positions[j].y);
      if (d <= 0.0) {
        throw std::invalid_argument("capacity_matrix: coincident vehicles");
      }
      if (d > params.comm_range_m) continue;
      const double g = path_gain(d, params) * shadowing_factor(i, j, params);
      h(i, j) = g;
      h(j, i) = g;
    }
  }
  return h;
}

/// Per-subchannel capacity C_ij for every ordered pair, bits/s.
inline SquareMatrix capacity_matrix(std::span<const Point2> positions,
                                    const ChannelParams& params) {
  SquareMatrix c = gain_matrix(positions, params);
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c(i, j) = i == j ? 0.0 : subchannel_capacity(c(i, j), params);
    }
  }
  return c;
}

}  // namespace pacp
