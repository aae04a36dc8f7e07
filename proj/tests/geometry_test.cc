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

#include "pacp/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "pacp/rng.hpp"

namespace pacp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-12;

// Plain 3x3 product, kept separate from RigidTransform's own arithmetic.
using Mat3 = std::array<std::array<double, 3>, 3>;
Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k)
      for (int q = 0; q < 3; ++q) c[r][q] += a[r][k] * b[k][q];
  return c;
}

TEST(PoseTest, NormalizesHeading) {
  EXPECT_NEAR(Pose(0, 0, 3 * kPi / 2).theta, -kPi / 2, kEps);
  EXPECT_NEAR(Pose(0, 0, kPi).theta, -kPi, kEps);
  EXPECT_NEAR(Pose(0, 0, -kPi).theta, -kPi, kEps);
  for (double t = -20.0; t < 20.0; t += 0.37) {
    const double w = normalize_angle(t);
    EXPECT_GE(w, -kPi);
    EXPECT_LT(w, kPi);
    EXPECT_NEAR(std::remainder(w - t, 2 * kPi), 0.0, 1e-9);
  }
}

TEST(ComposeTransformTest, ZeroDisplacementIsIdentity) {
  const RigidTransform t = compose_transform(Pose(3, 4, 0.2), Pose(3, 4, 0.2));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(t(r, c), r == c ? 1.0 : 0.0, kEps);
}

TEST(ComposeTransformTest, PureTranslation) {
  const RigidTransform t = compose_transform(Pose(1, 0, 0), Pose(0, 0, 0));
  const Point2 p = apply_transform(t, {0, 0, 1});
  EXPECT_NEAR(p.x, 1.0, kEps);
  EXPECT_NEAR(p.y, 0.0, kEps);
}

TEST(ComposeTransformTest, QuarterTurnMatchesMatrixOracle) {
  const RigidTransform t =
      compose_transform(Pose(0, 0, kPi / 2), Pose(0, 0, 0));
  const Point2 p = apply_transform(t, {1, 0, 1});
  EXPECT_NEAR(p.x, 0.0, kEps);
  EXPECT_NEAR(p.y, 1.0, kEps);

  // T x Theta written out by hand for a general displacement.
  const Pose ego(5, -2, 0.7), other(1, 3, -0.4);
  const double dt = ego.theta - other.theta;
  const Mat3 tr{{{1, 0, ego.x - other.x}, {0, 1, ego.y - other.y}, {0, 0, 1}}};
  const Mat3 rot{{{std::cos(dt), -std::sin(dt), 0},
                  {std::sin(dt), std::cos(dt), 0},
                  {0, 0, 1}}};
  const Mat3 want = mul(tr, rot);
  const RigidTransform got = compose_transform(ego, other);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(got(r, c), want[r][c], 1e-12);
}

TEST(ComposeTransformTest, RejectsNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Pose bad;
  bad.x = nan;
  EXPECT_THROW(compose_transform(bad, Pose()), std::invalid_argument);
  EXPECT_THROW(relative_transform(Pose(), bad), std::invalid_argument);
}

TEST(ApplyTransformTest, Examples) {
  const Point2 a = apply_transform(RigidTransform(), {3, 4, 1});
  EXPECT_EQ(a, (Point2{3, 4}));
  const Point2 b = apply_transform(
      RigidTransform::from_rotation_translation(0, 2, 0), {0, 0, 1});
  EXPECT_NEAR(b.x, 2.0, kEps);
  EXPECT_NEAR(b.y, 0.0, kEps);
  const Point2 c = apply_transform(
      RigidTransform::from_rotation_translation(kPi, 1, 0), {1, 0, 1});
  EXPECT_NEAR(c.x, 0.0, kEps);
  EXPECT_NEAR(c.y, 0.0, kEps);
}

TEST(ApplyTransformTest, RejectsBadInput) {
  EXPECT_THROW(apply_transform(RigidTransform(), {1, 1, 2}),
               std::invalid_argument);
  EXPECT_THROW(apply_transform(RigidTransform(),
                               {std::numeric_limits<double>::infinity(), 0, 1}),
               std::invalid_argument);
}

TEST(RigidTransformTest, FromMatrixValidates) {
  EXPECT_NO_THROW(RigidTransform::from_matrix(
      {{{0, -1, 3}, {1, 0, 4}, {0, 0, 1}}}));
  // Reflection: orthonormal but determinant -1.
  EXPECT_THROW(
      RigidTransform::from_matrix({{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}}}),
      std::invalid_argument);
  EXPECT_THROW(RigidTransform::from_matrix({{{2, 0, 0}, {0, 1, 0}, {0, 0, 1}}}),
               std::invalid_argument);
  EXPECT_THROW(RigidTransform::from_matrix({{{1, 0, 0}, {0, 1, 0}, {0, 1, 1}}}),
               std::invalid_argument);
}

TEST(RigidTransformTest, RoundTrip) {
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const RigidTransform t = RigidTransform::from_rotation_translation(
        rng.uniform(-4, 4), rng.uniform(-100, 100), rng.uniform(-100, 100));
    const Point2 p{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    const Point2 back = t.inverse().apply(t.apply(p));
    EXPECT_NEAR(back.x, p.x, 1e-9);
    EXPECT_NEAR(back.y, p.y, 1e-9);
  }
}

TEST(RelativeTransformTest, MapsLocalPointsConsistently) {
  const Pose ego(10, 5, 0.9), other(-3, 8, -2.1);
  const Point2 in_other{4, -1};
  const Point2 world = world_from_local(other).apply(in_other);
  const Point2 want = world_from_local(ego).inverse().apply(world);
  const Point2 got = relative_transform(ego, other).apply(in_other);
  EXPECT_NEAR(got.x, want.x, 1e-9);
  EXPECT_NEAR(got.y, want.y, 1e-9);
}

TEST(BoxTest, RejectsUnorderedCorners) {
  EXPECT_THROW(Box2(1, 0, 0, 1), std::invalid_argument);
  EXPECT_NO_THROW(Box2(0, 0, 0, 0));
}

TEST(BoxIouTest, Examples) {
  const Box2 unit(0, 0, 1, 1);
  EXPECT_DOUBLE_EQ(box_iou(unit, unit), 1.0);
  EXPECT_DOUBLE_EQ(box_iou(unit, Box2(2, 2, 3, 3)), 0.0);
  EXPECT_NEAR(box_iou(unit, Box2(0.5, 0, 1.5, 1)), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(box_iou(Box2(1, 1, 1, 1), Box2(1, 1, 1, 1)), 0.0);
}

TEST(BoxIouTest, SymmetricAndBounded) {
  Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    auto box = [&] {
      const double x = rng.uniform(-5, 5), y = rng.uniform(-5, 5);
      return Box2(x, y, x + rng.uniform(0, 4), y + rng.uniform(0, 4));
    };
    const Box2 a = box(), b = box();
    const double ab = box_iou(a, b);
    EXPECT_DOUBLE_EQ(ab, box_iou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    if (a.area() > 0) {
      EXPECT_DOUBLE_EQ(box_iou(a, a), 1.0);
    }
  }
}

TEST(DiscTest, RejectsNonPositiveRadius) {
  EXPECT_THROW(Disc({0, 0}, 0.0), std::invalid_argument);
  EXPECT_THROW(Disc({0, 0}, -1.0), std::invalid_argument);
}

// Independent reference: scan every lattice cell in a bounding box.
double brute_union_area(const std::vector<Disc>& discs, double cell) {
  if (discs.empty()) return 0.0;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const Disc& d : discs) {
    x0 = std::min(x0, d.center.x - d.radius);
    x1 = std::max(x1, d.center.x + d.radius);
    y0 = std::min(y0, d.center.y - d.radius);
    y1 = std::max(y1, d.center.y + d.radius);
  }
  long count = 0;
  for (long r = static_cast<long>(std::floor(y0 / cell)) - 1;
       r <= static_cast<long>(std::ceil(y1 / cell)) + 1; ++r) {
    for (long c = static_cast<long>(std::floor(x0 / cell)) - 1;
         c <= static_cast<long>(std::ceil(x1 / cell)) + 1; ++c) {
      const double px = (c + 0.5) * cell, py = (r + 0.5) * cell;
      for (const Disc& d : discs) {
        const double dx = px - d.center.x, dy = py - d.center.y;
        if (dx * dx + dy * dy <= d.radius * d.radius) {
          ++count;
          break;
        }
      }
    }
  }
  return count * cell * cell;
}

TEST(UnionAreaTest, Examples) {
  EXPECT_EQ(union_area({}), 0.0);
  const double tol = disc_area_tolerance(10.0, kDefaultCoverageCell);
  const std::vector<Disc> one{Disc({3.3, -1.2}, 10.0)};
  const std::vector<Disc> twice{one[0], one[0]};
  EXPECT_EQ(union_area(twice), union_area(one));
  EXPECT_NEAR(union_area(one), kPi * 100, tol);
  const std::vector<Disc> disjoint{Disc({0, 0}, 5.0), Disc({40, 0}, 10.0)};
  EXPECT_NEAR(union_area(disjoint), kPi * 125,
              disc_area_tolerance(5.0, 0.5) + tol);
}

TEST(UnionAreaTest, MatchesCellScan) {
  Rng rng(3);
  for (int k = 0; k < 30; ++k) {
    std::vector<Disc> discs;
    const int m = 1 + static_cast<int>(rng.below(5));
    for (int q = 0; q < m; ++q) {
      discs.emplace_back(Point2{rng.uniform(-30, 30), rng.uniform(-30, 30)},
                         rng.uniform(0.3, 15));
    }
    for (double cell : {0.5, 0.25, 1.3}) {
      EXPECT_DOUBLE_EQ(union_area(discs, cell), brute_union_area(discs, cell));
    }
  }
}

TEST(UnionAreaTest, MonotoneAndSubmodular) {
  Rng rng(5);
  auto random_disc = [&] {
    return Disc({rng.uniform(-40, 40), rng.uniform(-10, 10)},
                rng.uniform(5, 40));
  };
  for (int k = 0; k < 300; ++k) {
    std::vector<Disc> a, b;
    const int nb = static_cast<int>(rng.below(6));
    for (int q = 0; q < nb; ++q) {
      b.push_back(random_disc());
      if (rng.uniform() < 0.5) a.push_back(b.back());
    }
    const Disc e = random_disc();
    auto plus = [&](std::vector<Disc> v) {
      v.push_back(e);
      return v;
    };
    EXPECT_LE(union_area(a), union_area(b));
    // The lattice makes this exact: no tolerance needed.
    EXPECT_GE(union_area(plus(a)) - union_area(a),
              union_area(plus(b)) - union_area(b));
  }
}

TEST(UnionAreaTest, RejectsBadCell) {
  const std::vector<Disc> one{Disc({0, 0}, 1.0)};
  EXPECT_THROW(union_area(one, 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace pacp
