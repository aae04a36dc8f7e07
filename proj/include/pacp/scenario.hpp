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
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "pacp/config.hpp"
#include "pacp/geometry.hpp"
#include "pacp/matrix.hpp"
#include "pacp/rng.hpp"

namespace pacp {

inline constexpr double kVehicleLength = 4.5;
inline constexpr double kVehicleWidth = 1.9;

struct VehicleState {
  std::size_t id = 0;
  Pose pose;
  double speed_kmh = 0.0;
  /// A_j: local perception data generated per second, bits/s.
  double local_rate = 0.0;
  /// F_j: processing capability, cycles/s.
  double cpu_hz = 0.0;
  double perception_radius = 40.0;
};

enum class ObjectKind { kVehicle, kPedestrian, kObstacle };

inline constexpr std::int64_t kNoOwner = -1;

struct WorldObject {
  Box2 box;
  ObjectKind kind = ObjectKind::kObstacle;
  /// Index of the vehicle this footprint belongs to, or kNoOwner.
  std::int64_t owner = kNoOwner;
};

struct ScenarioState {
  std::vector<VehicleState> vehicles;
  /// Synthetic ground-truth objects (parked cars, pedestrians, debris).
  std::vector<WorldObject> objects;
  std::size_t ego = 0;

  std::vector<Point2> positions() const {
    std::vector<Point2> p;
    p.reserve(vehicles.size());
    for (const auto& v : vehicles) p.push_back(v.pose.position());
    return p;
  }
};

/// Binary occupancy raster in the owning vehicle's frame. The window is
/// `dim` x `dim` cells of `cell` meters centered on the vehicle; cell
/// (row, col) has its center at local
/// ((col + 0.5) * cell - extent / 2, (row + 0.5) * cell - extent / 2).
struct BevGrid {
  Pose origin;
  double cell = 0.4;
  int dim = 0;
  std::vector<std::uint8_t> cells;

  BevGrid() = default;
  BevGrid(const Pose& o, double cell_size, int cells_per_side)
      : origin(o),
        cell(cell_size),
        dim(cells_per_side),
        cells(static_cast<std::size_t>(cells_per_side) * cells_per_side, 0) {}

  static BevGrid with_extent(const Pose& o, double cell_size, double extent) {
    return BevGrid(o, cell_size,
                   static_cast<int>(std::lround(extent / cell_size)));
  }

  double extent() const { return dim * cell; }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * dim + col;
  }
  std::uint8_t at(int row, int col) const { return cells[index(row, col)]; }
  void set(int row, int col, std::uint8_t v = 1) { cells[index(row, col)] = v; }

  Point2 cell_center(std::size_t idx) const {
    const int row = static_cast<int>(idx / dim);
    const int col = static_cast<int>(idx % dim);
    const double half = extent() / 2;
    return {(col + 0.5) * cell - half, (row + 0.5) * cell - half};
  }

  /// Cell index containing local point p, or -1 outside the window.
  std::int64_t locate(Point2 p) const {
    const double half = extent() / 2;
    const double fc = std::floor((p.x + half) / cell);
    const double fr = std::floor((p.y + half) / cell);
    if (fc < 0 || fr < 0 || fc >= dim || fr >= dim) return -1;
    return static_cast<std::int64_t>(fr) * dim + static_cast<std::int64_t>(fc);
  }

  std::size_t occupied_count() const {
    return static_cast<std::size_t>(
        std::count(cells.begin(), cells.end(), std::uint8_t{1}));
  }

  friend bool operator==(const BevGrid& a, const BevGrid& b) {
    return a.cell == b.cell && a.dim == b.dim && a.cells == b.cells;
  }
};

namespace detail {

inline double lane_center_y(int lane, int lanes, double lane_width) {
  return (lane - lanes / 2.0 + 0.5) * lane_width;
}

}  // namespace detail

/// Number of vehicles the road can host with the configured spacing.
inline std::size_t placement_capacity(const ScenarioConfig& cfg) {
  const auto slots_per_lane =
      static_cast<std::size_t>(std::floor(cfg.road_length_m / cfg.min_gap_m));
  return slots_per_lane * static_cast<std::size_t>(cfg.lanes);
}

/// Places vehicles uniformly on the lanes of a straight highway. Each lane
/// is cut into slots of at least min_gap_m; distinct slots are drawn and
/// every vehicle is jittered inside its slot. Lanes with y > 0 travel
/// toward +x, the others toward -x.
inline ScenarioState generate_highway(const ScenarioConfig& cfg) {
  cfg.validate();
  const std::size_t capacity = placement_capacity(cfg);
  const auto n = static_cast<std::size_t>(cfg.num_vehicles);
  if (n > capacity) {
    throw std::invalid_argument("generate_highway: " + std::to_string(n) +
                                " vehicles exceed placement capacity " +
                                std::to_string(capacity));
  }
  Rng rng(hash_key({cfg.seed, 0x68696768ULL}));
  const std::size_t slots_per_lane = capacity / cfg.lanes;
  const double slot_len = cfg.road_length_m / slots_per_lane;

  std::vector<std::size_t> slots(capacity);
  std::iota(slots.begin(), slots.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t pick = k + rng.below(capacity - k);
    std::swap(slots[k], slots[pick]);
  }

  ScenarioState state;
  state.ego = static_cast<std::size_t>(cfg.ego_index);
  state.vehicles.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int lane = static_cast<int>(slots[k] / slots_per_lane);
    const std::size_t slot = slots[k] % slots_per_lane;
    VehicleState v;
    v.id = k;
    const double x = (static_cast<double>(slot) + rng.uniform(0.15, 0.85)) *
                     slot_len;
    const double y =
        detail::lane_center_y(lane, cfg.lanes, cfg.lane_width_m);
    v.pose = Pose(x, y, y >= 0.0 ? 0.0 : std::numbers::pi);
    v.speed_kmh = rng.uniform(cfg.speed_min_kmh, cfg.speed_max_kmh);
    v.local_rate = cfg.local_rate_bps;
    v.cpu_hz = rng.uniform(cfg.cpu_min_hz, cfg.cpu_max_hz);
    v.perception_radius = cfg.perception_radius_m;
    state.vehicles.push_back(v);
  }
  return state;
}

/// Ground-truth roadside objects: round(density * road_length) items,
/// half parked cars on the shoulders, 30% pedestrians on the sidewalks and
/// 20% debris on the shoulders.
inline std::vector<WorldObject> synthesize_objects(const ScenarioConfig& cfg,
                                                   std::uint64_t seed) {
  const auto count = static_cast<std::size_t>(
      std::llround(cfg.object_density_per_m * cfg.road_length_m));
  std::vector<WorldObject> objects;
  objects.reserve(count);
  Rng rng(hash_key({seed, 0x6f626a73ULL}));
  const double road_half = cfg.lanes * cfg.lane_width_m / 2.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = rng.uniform(0.0, cfg.road_length_m);
    const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double u = rng.uniform();
    WorldObject obj;
    if (u < 0.5) {
      obj.kind = ObjectKind::kVehicle;
      obj.box = Box2::centered({x, side * (road_half + 1.5)}, kVehicleLength,
                               kVehicleWidth);
    } else if (u < 0.8) {
      obj.kind = ObjectKind::kPedestrian;
      obj.box = Box2::centered(
          {x, side * (road_half + 3.5 + rng.uniform(0.0, 2.0))}, 0.6, 0.6);
    } else {
      obj.kind = ObjectKind::kObstacle;
      obj.box = Box2::centered(
          {x, side * (road_half + 0.8 + rng.uniform(0.0, 1.5))}, 1.2, 1.2);
    }
    objects.push_back(obj);
  }
  return objects;
}

inline std::vector<WorldObject> synthesize_objects(const ScenarioState&,
                                                   const ScenarioConfig& cfg) {
  return synthesize_objects(cfg, cfg.seed);
}

/// Axis-aligned footprint of every vehicle, tagged with its owner.
inline std::vector<WorldObject> vehicle_footprints(const ScenarioState& state) {
  std::vector<WorldObject> out;
  for (const auto& v : state.vehicles) {
    const double c = std::abs(std::cos(v.pose.theta));
    const double s = std::abs(std::sin(v.pose.theta));
    const double w = kVehicleLength * c + kVehicleWidth * s;
    const double h = kVehicleLength * s + kVehicleWidth * c;
    out.push_back({Box2::centered(v.pose.position(), w, h),
                   ObjectKind::kVehicle, static_cast<std::int64_t>(v.id)});
  }
  return out;
}

/// Synthetic objects plus vehicle footprints: everything a vehicle can see.
inline std::vector<WorldObject> world_objects(const ScenarioState& state) {
  std::vector<WorldObject> all = state.objects;
  auto fp = vehicle_footprints(state);
  all.insert(all.end(), fp.begin(), fp.end());
  return all;
}

/// Indices of objects the vehicle perceives: center within the perception
/// radius and at least one corner reachable by an unobstructed ray from the
/// vehicle center. The vehicle's own footprint is never reported.
inline std::vector<std::size_t> visible_objects(
    const VehicleState& vehicle, std::span<const WorldObject> objects) {
  const Point2 eye = vehicle.pose.position();
  std::vector<std::size_t> visible;
  for (std::size_t k = 0; k < objects.size(); ++k) {
    const WorldObject& target = objects[k];
    if (target.owner == static_cast<std::int64_t>(vehicle.id)) continue;
    const Point2 c = target.box.center();
    if (std::hypot(c.x - eye.x, c.y - eye.y) > vehicle.perception_radius) {
      continue;
    }
    bool seen = false;
    for (Point2 corner : target.box.corners()) {
      // Pull the corner slightly inside so rays do not graze neighbors
      // that share an edge with the target.
      corner.x += (c.x - corner.x) * 1e-6;
      corner.y += (c.y - corner.y) * 1e-6;
      bool blocked = false;
      for (std::size_t m = 0; m < objects.size() && !blocked; ++m) {
        if (m == k) continue;
        const WorldObject& other = objects[m];
        if (other.owner == static_cast<std::int64_t>(vehicle.id)) continue;
        if (other.box.contains(eye)) continue;
        blocked = segment_crosses_box(eye, corner, other.box);
      }
      if (!blocked) {
        seen = true;
        break;
      }
    }
    if (seen) visible.push_back(k);
  }
  return visible;
}

/// Sets the cells covered by `box` (world frame) that lie within `radius`
/// of the grid origin.
inline void rasterize_box(BevGrid& grid, const Box2& box, double radius) {
  const RigidTransform local_from_world =
      world_from_local(grid.origin).inverse();
  double lx0 = 1e300, ly0 = 1e300, lx1 = -1e300, ly1 = -1e300;
  for (Point2 c : box.corners()) {
    const Point2 l = local_from_world.apply(c);
    lx0 = std::min(lx0, l.x);
    ly0 = std::min(ly0, l.y);
    lx1 = std::max(lx1, l.x);
    ly1 = std::max(ly1, l.y);
  }
  const double half = grid.extent() / 2;
  auto bin = [&](double v) {
    return static_cast<int>(std::floor((v + half) / grid.cell));
  };
  const int c0 = std::max(0, bin(lx0));
  const int r0 = std::max(0, bin(ly0));
  const int c1 = std::min(grid.dim - 1, bin(lx1));
  const int r1 = std::min(grid.dim - 1, bin(ly1));
  const RigidTransform world_from_grid = world_from_local(grid.origin);
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) {
      const std::size_t idx = grid.index(row, col);
      const Point2 local = grid.cell_center(idx);
      if (std::hypot(local.x, local.y) > radius) continue;
      if (box.contains(world_from_grid.apply(local))) grid.cells[idx] = 1;
    }
  }
}

struct BevParams {
  double cell = 0.4;
  double extent = 80.0;
  /// Probability that any given cell is flipped.
  double noise_rate = 0.0;
};

/// Per-cell flip decision shared by every noise source so that a cell
/// flipped at a low rate is also flipped at any higher rate.
inline bool cell_flipped(std::uint64_t seed, std::uint64_t stream,
                         std::size_t cell_index, double rate) {
  if (rate <= 0.0) return false;
  return unit_from_bits(hash_key({seed, stream, cell_index})) < rate;
}

/// Geometric stand-in for a camera-to-BEV network: rasterizes the visible
/// objects within the perception radius in the vehicle frame, then flips
/// cells independently with probability noise_rate.
inline BevGrid rasterize_bev(const VehicleState& vehicle,
                             std::span<const WorldObject> objects,
                             const BevParams& params, std::uint64_t seed) {
  BevGrid grid = BevGrid::with_extent(vehicle.pose, params.cell, params.extent);
  for (std::size_t k : visible_objects(vehicle, objects)) {
    rasterize_box(grid, objects[k].box, vehicle.perception_radius);
  }
  if (params.noise_rate > 0.0) {
    for (std::size_t idx = 0; idx < grid.cells.size(); ++idx) {
      if (cell_flipped(seed, vehicle.id, idx, params.noise_rate)) {
        grid.cells[idx] ^= 1;
      }
    }
  }
  return grid;
}

/// L_ij: Euclidean distance over the communication range, clamped to
/// [0, 1].
inline double normalized_distance(std::size_t i, std::size_t j,
                                  const ScenarioState& state,
                                  double comm_range) {
  if (i == j) throw std::invalid_argument("normalized_distance: i == j");
  if (i >= state.vehicles.size() || j >= state.vehicles.size()) {
    throw std::out_of_range("normalized_distance: index out of range");
  }
  const Point2 a = state.vehicles[i].pose.position();
  const Point2 b = state.vehicles[j].pose.position();
  return std::clamp(std::hypot(a.x - b.x, a.y - b.y) / comm_range, 0.0, 1.0);
}

inline SquareMatrix normalized_distance_matrix(const ScenarioState& state,
                                               double comm_range) {
  const std::size_t n = state.vehicles.size();
  SquareMatrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) l(i, j) = normalized_distance(i, j, state, comm_range);
    }
  }
  return l;
}

/// Perception disc of every vehicle.
inline std::vector<Disc> perception_regions(const ScenarioState& state) {
  std::vector<Disc> discs;
  for (const auto& v : state.vehicles) {
    discs.emplace_back(v.pose.position(), v.perception_radius);
  }
  return discs;
}

inline BevParams bev_params(const ScenarioConfig& cfg) {
  return {cfg.bev_cell_m, cfg.bev_extent_m, cfg.bev_noise_rate};
}

/// Full scenario: vehicles plus synthetic objects, both drawn from the
/// config seed.
inline ScenarioState build_scenario(const ScenarioConfig& cfg) {
  ScenarioState state = generate_highway(cfg);
  state.objects = synthesize_objects(cfg, cfg.seed);
  return state;
}

}  // namespace pacp
