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
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pacp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Wraps an angle into [-pi, pi).
inline double normalize_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(theta + std::numbers::pi, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  wrapped -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift for inputs like -pi - 2^-52.
  if (wrapped >= std::numbers::pi) wrapped -= kTwoPi;
  return wrapped;
}

/// Planar pose of a vehicle: position in meters, heading in radians.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x_in, double y_in, double theta_in)
      : x(x_in), y(y_in), theta(normalize_angle(theta_in)) {}

  Point2 position() const { return {x, y}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta);
  }
};

/// Homogeneous 3x3 rigid transform. The bottom row is always (0, 0, 1) and
/// the upper-left block is a proper rotation.
class RigidTransform {
 public:
  using Matrix = std::array<std::array<double, 3>, 3>;

  RigidTransform() : m_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}

  /// Rotation by `theta` (counter-clockwise) followed by translation.
  static RigidTransform from_rotation_translation(double theta, double tx,
                                                  double ty) {
    if (!std::isfinite(theta) || !std::isfinite(tx) || !std::isfinite(ty)) {
      throw std::invalid_argument("RigidTransform: non-finite parameter");
    }
    RigidTransform t;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    t.m_ = {{{c, -s, tx}, {s, c, ty}, {0.0, 0.0, 1.0}}};
    return t;
  }

  /// Validates and adopts an explicit matrix.
  static RigidTransform from_matrix(const Matrix& m, double tol = 1e-9) {
    for (const auto& row : m) {
      for (double v : row) {
        if (!std::isfinite(v)) {
          throw std::invalid_argument("RigidTransform: non-finite entry");
        }
      }
    }
    if (m[2][0] != 0.0 || m[2][1] != 0.0 || m[2][2] != 1.0) {
      throw std::invalid_argument("RigidTransform: bottom row must be 0 0 1");
    }
    const double a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    const bool orthonormal = std::abs(a * a + c * c - 1.0) <= tol &&
                             std::abs(b * b + d * d - 1.0) <= tol &&
                             std::abs(a * b + c * d) <= tol;
    if (!orthonormal || std::abs(a * d - b * c - 1.0) > tol) {
      throw std::invalid_argument("RigidTransform: block is not a rotation");
    }
    RigidTransform t;
    t.m_ = m;
    return t;
  }

  const Matrix& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_[row][col]; }

  double rotation_angle() const { return std::atan2(m_[1][0], m_[0][0]); }
  Point2 translation() const { return {m_[0][2], m_[1][2]}; }

  Point2 apply(Point2 p) const {
    return {m_[0][0] * p.x + m_[0][1] * p.y + m_[0][2],
            m_[1][0] * p.x + m_[1][1] * p.y + m_[1][2]};
  }

  RigidTransform inverse() const {
    // [R t]^-1 = [R^T  -R^T t]
    RigidTransform inv;
    const double tx = m_[0][2], ty = m_[1][2];
    inv.m_ = {{{m_[0][0], m_[1][0], -(m_[0][0] * tx + m_[1][0] * ty)},
               {m_[0][1], m_[1][1], -(m_[0][1] * tx + m_[1][1] * ty)},
               {0.0, 0.0, 1.0}}};
    return inv;
  }

  /// Matrix product (*this) x rhs: applies rhs first.
  RigidTransform operator*(const RigidTransform& rhs) const {
    RigidTransform out;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 3; ++c) {
        double v = 0.0;
        for (int k = 0; k < 3; ++k) v += m_[r][k] * rhs.m_[k][c];
        out.m_[r][c] = v;
      }
    }
    out.m_[2] = {0.0, 0.0, 1.0};
    return out;
  }

 private:
  Matrix m_;
};

/// Applies `t` to the homogeneous point (x, y, w). The weight must be 1.
inline Point2 apply_transform(const RigidTransform& t,
                              const std::array<double, 3>& homogeneous) {
  if (!std::isfinite(homogeneous[0]) || !std::isfinite(homogeneous[1])) {
    throw std::invalid_argument("apply_transform: non-finite point");
  }
  if (homogeneous[2] != 1.0) {
    throw std::invalid_argument("apply_transform: third component must be 1");
  }
  return t.apply({homogeneous[0], homogeneous[1]});
}

/// Builds T x Theta from the pose differences ego - other, exactly as the
/// BEV remapping matrices are written: a counter-clockwise rotation by
/// (theta_ego - theta_other) followed by a translation of
/// (x_ego - x_other, y_ego - y_other).
inline RigidTransform compose_transform(const Pose& ego, const Pose& other) {
  if (!ego.finite() || !other.finite()) {
    throw std::invalid_argument("compose_transform: non-finite pose");
  }
  const RigidTransform translation = RigidTransform::from_rotation_translation(
      0.0, ego.x - other.x, ego.y - other.y);
  const RigidTransform rotation = RigidTransform::from_rotation_translation(
      ego.theta - other.theta, 0.0, 0.0);
  return translation * rotation;
}

/// Transform taking coordinates in `pose`'s local frame to world
/// coordinates.
inline RigidTransform world_from_local(const Pose& pose) {
  return RigidTransform::from_rotation_translation(pose.theta, pose.x, pose.y);
}

/// Transform mapping points expressed in `other`'s local frame into
/// `ego`'s local frame. Used to align BEV rasters between vehicles.
inline RigidTransform relative_transform(const Pose& ego, const Pose& other) {
  if (!ego.finite() || !other.finite()) {
    throw std::invalid_argument("relative_transform: non-finite pose");
  }
  return world_from_local(ego).inverse() * world_from_local(other);
}

/// Pose whose local frame is given by `world_from_frame`.
inline Pose pose_from_transform(const RigidTransform& world_from_frame) {
  const Point2 t = world_from_frame.translation();
  return Pose(t.x, t.y, world_from_frame.rotation_angle());
}

/// Axis-aligned box given by its top-left (x0, y0) and bottom-right
/// (x1, y1) corners.
struct Box2 {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  Box2() = default;
  Box2(double x0_in, double y0_in, double x1_in, double y1_in)
      : x0(x0_in), y0(y0_in), x1(x1_in), y1(y1_in) {
    if (!(x0 <= x1) || !(y0 <= y1)) {
      throw std::invalid_argument("Box2: corners out of order");
    }
  }

  static Box2 centered(Point2 c, double width, double height) {
    return Box2(c.x - width / 2, c.y - height / 2, c.x + width / 2,
                c.y + height / 2);
  }

  double area() const { return std::abs((x0 - x1) * (y0 - y1)); }
  Point2 center() const { return {(x0 + x1) / 2, (y0 + y1) / 2}; }
  bool contains(Point2 p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  std::array<Point2, 4> corners() const {
    return {Point2{x0, y0}, Point2{x1, y0}, Point2{x1, y1}, Point2{x0, y1}};
  }

  friend bool operator==(const Box2&, const Box2&) = default;
};

inline double intersection_area(const Box2& a, const Box2& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

/// Intersection over union of two boxes. Returns 0 for disjoint boxes and
/// for the degenerate case where the union has zero area.
inline double box_iou(const Box2& g, const Box2& p) {
  const double inter = intersection_area(g, p);
  const double uni = g.area() + p.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

/// True when the segment a->b passes through the interior of `box` for a
/// parameter span longer than `min_overlap`.
inline bool segment_crosses_box(Point2 a, Point2 b, const Box2& box,
                                double min_overlap = 1e-9) {
  double t0 = 0.0, t1 = 1.0;
  const double d[2] = {b.x - a.x, b.y - a.y};
  const double o[2] = {a.x, a.y};
  const double lo[2] = {box.x0, box.y0};
  const double hi[2] = {box.x1, box.y1};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (o[k] <= lo[k] || o[k] >= hi[k]) return false;
      continue;
    }
    double ta = (lo[k] - o[k]) / d[k];
    double tb = (hi[k] - o[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t1 - t0 <= min_overlap) return false;
  }
  return t1 - t0 > min_overlap;
}

/// Circular perception region.
struct Disc {
  Point2 center;
  double radius = 1.0;

  Disc() = default;
  Disc(Point2 c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw std::invalid_argument("Disc: radius must be positive");
    }
  }
};

/// Default coverage lattice spacing in meters.
inline constexpr double kDefaultCoverageCell = 0.5;

/// Horizontal run of lattice cells [first, last] on one row.
struct CellRun {
  std::int64_t row = 0;
  std::int64_t first = 0;
  std::int64_t last = -1;
};

/// Lattice cells whose centers ((k + 0.5) * cell) fall inside the disc, as
/// one run per row. The lattice is anchored at the world origin so every
/// call with the same disc yields the same cell set.
inline std::vector<CellRun> disc_cells(const Disc& disc, double cell) {
  std::vector<CellRun> runs;
  const double r = disc.radius;
  const auto row_lo =
      static_cast<std::int64_t>(std::ceil((disc.center.y - r) / cell - 0.5));
  const auto row_hi =
      static_cast<std::int64_t>(std::floor((disc.center.y + r) / cell - 0.5));
  for (std::int64_t row = row_lo; row <= row_hi; ++row) {
    const double yc = (static_cast<double>(row) + 0.5) * cell;
    const double dy = yc - disc.center.y;
    const double half_sq = r * r - dy * dy;
    if (half_sq < 0.0) continue;
    const double half = std::sqrt(half_sq);
    const auto first = static_cast<std::int64_t>(
        std::ceil((disc.center.x - half) / cell - 0.5));
    const auto last = static_cast<std::int64_t>(
        std::floor((disc.center.x + half) / cell - 0.5));
    if (first <= last) runs.push_back({row, first, last});
  }
  return runs;
}

/// Number of lattice cells covered by the union of `regions`.
inline std::int64_t union_cell_count(std::span<const Disc> regions,
                                     double cell) {
  if (regions.empty()) return 0;
  std::vector<CellRun> runs;
  for (const Disc& d : regions) {
    auto r = disc_cells(d, cell);
    runs.insert(runs.end(), r.begin(), r.end());
  }
  std::sort(runs.begin(), runs.end(), [](const CellRun& a, const CellRun& b) {
    return a.row != b.row ? a.row < b.row : a.first < b.first;
  });
  std::int64_t count = 0;
  std::size_t k = 0;
  while (k < runs.size()) {
    const std::int64_t row = runs[k].row;
    std::int64_t cur_first = runs[k].first;
    std::int64_t cur_last = runs[k].last;
    ++k;
    for (; k < runs.size() && runs[k].row == row; ++k) {
      if (runs[k].first > cur_last + 1) {
        count += cur_last - cur_first + 1;
        cur_first = runs[k].first;
        cur_last = runs[k].last;
      } else {
        cur_last = std::max(cur_last, runs[k].last);
      }
    }
    count += cur_last - cur_first + 1;
  }
  return count;
}

/// Area of the union of discs, measured on a fixed lattice of `cell`-sized
/// squares (a square counts when its center is covered). Because the
/// lattice is fixed, the result is an exact coverage function of the cell
/// sets: monotone and submodular with no discretization slack.
inline double union_area(std::span<const Disc> regions,
                         double cell = kDefaultCoverageCell) {
  if (!(cell > 0.0)) throw std::invalid_argument("union_area: cell <= 0");
  return static_cast<double>(union_cell_count(regions, cell)) * cell * cell;
}

/// Worst-case gap between the lattice area of one disc and pi r^2.
inline double disc_area_tolerance(double radius, double cell) {
  return 2.0 * std::numbers::pi * radius * cell;
}

}  // namespace pacp
