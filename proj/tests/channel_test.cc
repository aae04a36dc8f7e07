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

#include "pacp/channel.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

namespace pacp {
namespace {

ChannelParams table_params() {
  ChannelParams p;
  p.bandwidth_hz = 200e6;
  p.num_subchannels = 4;
  p.tx_power_w = 8e-3;
  return p;
}

// Same link budget evaluated in the dB domain.
double capacity_db_domain(double distance, const ChannelParams& p) {
  const double gain_db =
      10 * std::log10(p.reference_gain) -
      10 * p.pathloss_exponent * std::log10(distance);
  const double bw = p.bandwidth_hz / p.num_subchannels;
  const double noise_dbm =
      kThermalNoiseDbmPerHz + p.noise_offset_db + 10 * std::log10(bw);
  const double tx_dbm = 10 * std::log10(p.tx_power_w * 1e3);
  const double snr = std::pow(10.0, (tx_dbm + gain_db - noise_dbm) / 10.0);
  return bw * std::log(1 + snr) / std::log(2.0);
}

TEST(PathGainTest, Examples) {
  ChannelParams p;
  EXPECT_DOUBLE_EQ(path_gain(1.0, p), p.reference_gain);
  p.pathloss_exponent = 2.0;
  EXPECT_NEAR(path_gain(10.0, p), p.reference_gain / 100, 1e-18);
  p.pathloss_exponent = 3.5;
  EXPECT_NEAR(path_gain(50.0, p) / (p.reference_gain * std::pow(50.0, -3.5)),
              1.0, 1e-12);
}

TEST(PathGainTest, RejectsNonPositiveDistance) {
  const ChannelParams p;
  EXPECT_THROW(path_gain(0.0, p), std::invalid_argument);
  EXPECT_THROW(path_gain(-3.0, p), std::invalid_argument);
}

TEST(SubchannelCapacityTest, UnitSnrGivesBandwidth) {
  ChannelParams p = table_params();
  const double bw = 50e6;
  ASSERT_DOUBLE_EQ(p.subchannel_bandwidth(), bw);
  const double h = p.noise_psd() * bw / p.tx_power_w;
  EXPECT_NEAR(subchannel_capacity(h, p), 50e6, 1e-3);
  EXPECT_EQ(subchannel_capacity(0.0, p), 0.0);
}

TEST(SubchannelCapacityTest, TableLinkAt100m) {
  const ChannelParams p = table_params();
  const double c = subchannel_capacity(path_gain(100.0, p), p);
  EXPECT_NEAR(c / capacity_db_domain(100.0, p), 1.0, 1e-12);
  EXPECT_GT(c, 0.0);
}

TEST(SubchannelCapacityTest, Monotonicity) {
  ChannelParams p = table_params();
  const double h = path_gain(80.0, p);
  double last = 0.0;
  for (double mw : {1.0, 5.0, 8.0, 11.0, 50.0}) {
    p.tx_power_w = mw * 1e-3;
    const double c = subchannel_capacity(h, p);
    EXPECT_GT(c, last);
    last = c;
  }
  p = table_params();
  last = 0.0;
  for (double g : {1e-12, 1e-10, 1e-8, 1e-6}) {
    const double c = subchannel_capacity(g, p);
    EXPECT_GT(c, last);
    last = c;
  }
  last = 1e300;
  for (double db : {0.0, 4.0, 8.0}) {
    p.noise_offset_db = db;
    const double c = subchannel_capacity(h, p);
    EXPECT_LT(c, last);
    last = c;
  }
}

TEST(CapacityMatrixTest, SingleVehicle) {
  const std::vector<Point2> pos{{0, 0}};
  const SquareMatrix c = capacity_matrix(pos, table_params());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c(0, 0), 0.0);
}

TEST(CapacityMatrixTest, SymmetricWithinRangeZeroBeyond) {
  const std::vector<Point2> pos{{0, 0}, {30, 4}, {181, 0}};
  const SquareMatrix c = capacity_matrix(pos, table_params());
  EXPECT_GT(c(0, 1), 0.0);
  EXPECT_EQ(c(0, 1), c(1, 0));
  EXPECT_NEAR(c(0, 1) / capacity_db_domain(std::hypot(30, 4), table_params()),
              1.0, 1e-12);
  EXPECT_EQ(c(0, 2), 0.0);
  EXPECT_EQ(c(1, 2), 0.0);  // about 151 m
  EXPECT_EQ(c(0, 0), 0.0);
}

TEST(CapacityMatrixTest, JustBeyondRange) {
  const std::vector<Point2> pos{{0, 0}, {151, 0}};
  const SquareMatrix c = capacity_matrix(pos, table_params());
  EXPECT_EQ(c(0, 1), 0.0);
  EXPECT_EQ(c(1, 0), 0.0);
}

TEST(CapacityMatrixTest, CoincidentThrows) {
  const std::vector<Point2> pos{{1, 1}, {1, 1}};
  EXPECT_THROW(capacity_matrix(pos, table_params()), std::invalid_argument);
}

TEST(CapacityMatrixTest, NoiseOffsetStrictlyDegrades) {
  const std::vector<Point2> pos{{0, 0}, {20, 3}, {70, -3}, {140, 0}};
  ChannelParams p = table_params();
  SquareMatrix prev = capacity_matrix(pos, p);
  for (double db : {4.0, 8.0}) {
    p.noise_offset_db = db;
    const SquareMatrix c = capacity_matrix(pos, p);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      for (std::size_t j = 0; j < pos.size(); ++j) {
        if (prev(i, j) > 0) {
          EXPECT_LT(c(i, j), prev(i, j));
        }
      }
    }
    prev = c;
  }
}

TEST(CapacityMatrixTest, ShadowingIsSymmetricAndSeeded) {
  const std::vector<Point2> pos{{0, 0}, {20, 3}, {70, -3}};
  ChannelParams p = table_params();
  p.shadowing_sigma_db = 6.0;
  p.shadowing_seed = 9;
  const SquareMatrix a = capacity_matrix(pos, p);
  EXPECT_EQ(a, capacity_matrix(pos, p));
  EXPECT_EQ(a(0, 2), a(2, 0));
  EXPECT_NE(a, capacity_matrix(pos, table_params()));
}

}  // namespace
}  // namespace pacp
