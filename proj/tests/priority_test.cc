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

#include "pacp/priority.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"

namespace pacp {
namespace {

VehicleState vehicle_at(std::size_t id, double x, double y, double theta) {
  VehicleState v;
  v.id = id;
  v.pose = Pose(x, y, theta);
  v.perception_radius = 40.0;
  return v;
}

TEST(TransformBevTest, IdentityKeepsGrid) {
  BevGrid g(Pose(), 1.0, 10);
  g.set(2, 3);
  g.set(7, 7);
  EXPECT_EQ(transform_bev(g, RigidTransform(), g), g);
  EXPECT_EQ(transform_bev(g, RigidTransform()), g);
}

TEST(TransformBevTest, OneCellShift) {
  BevGrid g(Pose(), 0.4, 20);
  g.set(4, 6);
  const BevGrid out = transform_bev(
      g, RigidTransform::from_rotation_translation(0, 0.4, 0), g);
  EXPECT_EQ(out.occupied_count(), 1u);
  EXPECT_EQ(out.at(4, 7), 1);
}

TEST(TransformBevTest, QuarterTurn) {
  BevGrid g(Pose(), 1.0, 10);
  g.set(5, 7);  // center (2.5, 0.5) -> (-0.5, 2.5)
  const BevGrid out = transform_bev(
      g, RigidTransform::from_rotation_translation(std::numbers::pi / 2, 0, 0),
      g);
  EXPECT_EQ(out.occupied_count(), 1u);
  EXPECT_EQ(out.at(7, 4), 1);
}

TEST(TransformBevTest, CellMismatchThrows) {
  const BevGrid a(Pose(), 0.4, 10), b(Pose(), 0.5, 10);
  EXPECT_THROW(transform_bev(a, RigidTransform(), b), std::invalid_argument);
}

// 16 masked cells, all set in the ego view.
struct WeightFixture {
  BevGrid ego{Pose(), 1.0, 8};
  BevGrid other{Pose(), 1.0, 8};
  BevGrid mask{Pose(), 1.0, 8};
  WeightFixture() {
    for (int r = 2; r < 6; ++r) {
      for (int c = 2; c < 6; ++c) {
        mask.set(r, c);
        ego.set(r, c);
      }
    }
    ego.set(0, 0);  // outside the mask, ignored
  }
};

TEST(PriorityWeightTest, EmptyIntersection) {
  WeightFixture f;
  EXPECT_EQ(priority_weight(f.ego, f.other, f.mask), 0.0);
  EXPECT_EQ(priority_weight(f.ego, f.other, f.mask, PriorityMode::kNormalized),
            0.0);
  const BevGrid empty(Pose(), 1.0, 8);
  EXPECT_EQ(priority_weight(empty, f.ego, f.mask), 0.0);
}

TEST(PriorityWeightTest, IdenticalViews) {
  WeightFixture f;
  f.other = f.ego;
  EXPECT_DOUBLE_EQ(priority_weight(f.ego, f.other, f.mask), 0.25);
  EXPECT_DOUBLE_EQ(
      priority_weight(f.ego, f.other, f.mask, PriorityMode::kNormalized), 1.0);
}

TEST(PriorityWeightTest, HalfAgree) {
  WeightFixture f;
  for (int r = 2; r < 4; ++r)
    for (int c = 2; c < 6; ++c) f.other.set(r, c);
  EXPECT_NEAR(priority_weight(f.ego, f.other, f.mask), std::sqrt(8.0) / 16,
              1e-15);
  EXPECT_NEAR(priority_weight(f.ego, f.other, f.mask), 0.177, 5e-4);
  EXPECT_NEAR(
      priority_weight(f.ego, f.other, f.mask, PriorityMode::kNormalized),
      std::sqrt(0.5), 1e-15);
}

TEST(PriorityWeightTest, Misaligned) {
  const BevGrid a(Pose(), 1.0, 8), b(Pose(), 1.0, 9);
  EXPECT_THROW(priority_weight(a, b, a), std::invalid_argument);
}

TEST(GateTest, Examples) {
  PriorityMatrix p(2);
  p(0, 1) = 0.1;
  p(1, 0) = 0.5;
  EXPECT_EQ(gate(p, 0.0), p);
  PriorityMatrix g = gate(p, 0.2);
  EXPECT_EQ(g(0, 1), 0.0);
  EXPECT_EQ(g(1, 0), 0.5);
  EXPECT_EQ(gate(g, 0.2), g);
  EXPECT_EQ(gate(p, 0.9), PriorityMatrix(2));
  EXPECT_EQ(gate(p, 0.5)(1, 0), 0.5);  // strictly below is dropped
  EXPECT_THROW(gate(p, -0.1), std::invalid_argument);
}

TEST(CompressionTest, QualityMonotone) {
  double last = 0.0;
  for (double r = 0.0; r <= 1.0001; r += 0.01) {
    const double q = compression_quality(r);
    EXPECT_GE(q, last);
    last = q;
  }
  EXPECT_EQ(compression_quality(1.0), 1.0);
  EXPECT_EQ(compression_loss_rate(1.0, 1.0), 0.0);
  EXPECT_NEAR(compression_loss_rate(0.5, 1.0), 0.06, 1e-12);
  EXPECT_EQ(compression_loss_rate(0.05, 100.0), 1.0);
}

ScenarioState colocated_pair() {
  ScenarioState s;
  s.vehicles = {vehicle_at(0, 0, 0, 0), vehicle_at(1, 0, 0, 0)};
  s.objects = {{Box2(8, 4, 12.5, 6), ObjectKind::kVehicle, kNoOwner},
               {Box2(-15, -7, -14, -6), ObjectKind::kObstacle, kNoOwner}};
  return s;
}

TEST(PriorityMatrixTest, SingleVehicle) {
  ScenarioState s;
  s.vehicles = {vehicle_at(0, 0, 0, 0)};
  const auto objs = world_objects(s);
  const auto views = perceive_all(s, objs, BevParams{}, 1);
  const PriorityMatrix p =
      priority_matrix(s, objs, views, PriorityMode::kLiteral, 150);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p(0, 0), 0.0);
}

TEST(PriorityMatrixTest, NoSharedObjects) {
  ScenarioState s;
  s.vehicles = {vehicle_at(0, 0, 0, 0), vehicle_at(1, 100, 0, 0)};
  s.objects = {{Box2(10, 4, 12, 6), ObjectKind::kObstacle, kNoOwner},
               {Box2(110, 4, 112, 6), ObjectKind::kObstacle, kNoOwner}};
  const auto objs = world_objects(s);
  const auto views = perceive_all(s, objs, BevParams{}, 1);
  for (auto mode : {PriorityMode::kLiteral, PriorityMode::kNormalized}) {
    const PriorityMatrix p = priority_matrix(s, objs, views, mode, 150);
    EXPECT_EQ(p(0, 1), 0.0);
    EXPECT_EQ(p(1, 0), 0.0);
  }
}

TEST(PriorityMatrixTest, ColocatedIdenticalViews) {
  const ScenarioState s = colocated_pair();
  const auto objs = world_objects(s);
  const auto views = perceive_all(s, objs, BevParams{}, 1);
  ASSERT_EQ(views[0].grid, views[1].grid);
  const PriorityMatrix p =
      priority_matrix(s, objs, views, PriorityMode::kNormalized, 150);
  EXPECT_DOUBLE_EQ(p(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(p(1, 0), 1.0);
}

TEST(PriorityMatrixTest, OutOfRangeIsZero) {
  ScenarioState s = colocated_pair();
  s.vehicles[1].pose = Pose(20, 0, 0);
  const auto objs = world_objects(s);
  const auto views = perceive_all(s, objs, BevParams{}, 1);
  const PriorityMatrix near =
      priority_matrix(s, objs, views, PriorityMode::kNormalized, 150);
  EXPECT_GT(near(0, 1), 0.0);
  const PriorityMatrix far =
      priority_matrix(s, objs, views, PriorityMode::kNormalized, 19);
  EXPECT_EQ(far(0, 1), 0.0);
}

class EngineOnScenario : public ::testing::TestWithParam<int> {};

TEST_P(EngineOnScenario, MatchesGridPipeline) {
  ScenarioConfig cfg;
  cfg.seed = static_cast<std::uint64_t>(GetParam());
  const ScenarioState s = build_scenario(cfg);
  const auto objs = world_objects(s);
  const auto views = perceive_all(s, objs, bev_params(cfg), cfg.seed);
  for (auto mode : {PriorityMode::kLiteral, PriorityMode::kNormalized}) {
    const PriorityEngine engine(s, objs, views, mode, cfg.comm_range_m, 3);
    for (std::size_t i = 0; i < s.vehicles.size(); ++i) {
      for (std::size_t j = 0; j < s.vehicles.size(); ++j) {
        if (i == j) continue;
        const Point2 a = s.vehicles[i].pose.position();
        const Point2 b = s.vehicles[j].pose.position();
        double want = 0.0;
        if (std::hypot(a.x - b.x, a.y - b.y) <= cfg.comm_range_m) {
          const BevGrid& ego = views[j].grid;
          const BevGrid aligned = transform_bev(
              views[i].grid,
              relative_transform(s.vehicles[j].pose, s.vehicles[i].pose), ego);
          const BevGrid mask = overlap_mask(s.vehicles[j], views[j], views[i],
                                            objs);
          want = priority_weight(ego, aligned, mask, mode);
        }
        EXPECT_NEAR(engine.weight(i, j), want, 1e-15) << i << "->" << j;
        // Loss only removes helper cells.
        double last = engine.weight(i, j);
        for (double loss : {0.05, 0.2, 0.5, 1.0}) {
          const double w = engine.weight(i, j, loss);
          EXPECT_LE(w, last);
          last = w;
        }
        EXPECT_EQ(engine.weight(i, j, 1.0), 0.0);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, EngineOnScenario, ::testing::Values(1, 2, 3));

}  // namespace
}  // namespace pacp
