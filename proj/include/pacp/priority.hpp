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
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pacp/config.hpp"
#include "pacp/geometry.hpp"
#include "pacp/matrix.hpp"
#include "pacp/rng.hpp"
#include "pacp/scenario.hpp"

namespace pacp {

/// P(i, j): weight of helper i's data at receiver j.
using PriorityMatrix = SquareMatrix;

/// Maps every occupied cell center of `grid` through `t` and re-bins it
/// into a raster shaped like `target`. Cells landing outside the window
/// are dropped.
inline BevGrid transform_bev(const BevGrid& grid, const RigidTransform& t,
                             const BevGrid& target) {
  if (grid.cell != target.cell) {
    throw std::invalid_argument("transform_bev: cell size mismatch");
  }
  BevGrid out(target.origin, target.cell, target.dim);
  for (std::size_t idx = 0; idx < grid.cells.size(); ++idx) {
    if (!grid.cells[idx]) continue;
    const std::int64_t dst = out.locate(t.apply(grid.cell_center(idx)));
    if (dst >= 0) out.cells[static_cast<std::size_t>(dst)] = 1;
  }
  return out;
}

/// Same as above with a destination window of the source's shape; the
/// result's origin is the frame that `t` maps into.
inline BevGrid transform_bev(const BevGrid& grid, const RigidTransform& t) {
  const RigidTransform world_from_frame =
      world_from_local(grid.origin) * t.inverse();
  BevGrid frame(pose_from_transform(world_from_frame), grid.cell, grid.dim);
  return transform_bev(grid, t, frame);
}

/// BEV-match weight over the masked cells. In literal mode this is
/// sqrt(sum of squared masked intersection cells) / (sum of masked ego
/// cells), which scores identical binary views 1/sqrt(M). Normalized mode
/// divides by the ego's self-score, giving sqrt(|intersection| / M).
inline double priority_weight(const BevGrid& ego, const BevGrid& other,
                              const BevGrid& mask,
                              PriorityMode mode = PriorityMode::kLiteral) {
  if (ego.cells.size() != other.cells.size() ||
      ego.cells.size() != mask.cells.size()) {
    throw std::invalid_argument("priority_weight: grids not aligned");
  }
  double inter_sq = 0.0;
  double ego_sum = 0.0;
  for (std::size_t k = 0; k < ego.cells.size(); ++k) {
    if (!mask.cells[k]) continue;
    const double e = ego.cells[k];
    const double o = other.cells[k];
    inter_sq += (e * o) * (e * o);
    ego_sum += e;
  }
  if (ego_sum <= 0.0) return 0.0;
  if (mode == PriorityMode::kNormalized) return std::sqrt(inter_sq / ego_sum);
  return std::sqrt(inter_sq) / ego_sum;
}

/// Zeroes every weight strictly below `threshold`.
inline PriorityMatrix gate(const PriorityMatrix& p, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("gate: threshold < 0");
  PriorityMatrix out = p;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (out(i, j) < threshold) out(i, j) = 0.0;
    }
  }
  return out;
}

/// Quality retained by a frame compressed to ratio r, from a fixed lookup
/// table standing in for a learned codec's rate-distortion curve.
inline double compression_quality(double ratio) {
  static constexpr std::array<std::pair<double, double>, 12> kTable = {{
      {0.05, 0.60}, {0.10, 0.70}, {0.20, 0.82}, {0.30, 0.88},
      {0.40, 0.915}, {0.50, 0.94}, {0.60, 0.955}, {0.70, 0.97},
      {0.80, 0.98}, {0.90, 0.988}, {0.95, 0.992}, {1.00, 1.00},
  }};
  if (ratio <= kTable.front().first) return kTable.front().second;
  if (ratio >= kTable.back().first) return kTable.back().second;
  for (std::size_t k = 1; k < kTable.size(); ++k) {
    if (ratio <= kTable[k].first) {
      const auto [r0, q0] = kTable[k - 1];
      const auto [r1, q1] = kTable[k];
      return q0 + (q1 - q0) * (ratio - r0) / (r1 - r0);
    }
  }
  return 1.0;
}

/// Fraction of occupied BEV cells lost in transit at ratio r.
inline double compression_loss_rate(double ratio, double scale) {
  return std::clamp(scale * (1.0 - compression_quality(ratio)), 0.0, 1.0);
}

/// Rasterized view of one vehicle plus the objects it actually perceived.
struct Perception {
  BevGrid grid;
  std::vector<std::size_t> visible;
};

inline std::vector<Perception> perceive_all(
    const ScenarioState& state, std::span<const WorldObject> objects,
    const BevParams& params, std::uint64_t seed) {
  std::vector<Perception> out;
  out.reserve(state.vehicles.size());
  for (const auto& v : state.vehicles) {
    out.push_back({rasterize_bev(v, objects, params, seed),
                   visible_objects(v, objects)});
  }
  return out;
}

/// [.]_pi for the pair (helper, receiver): cells, in the receiver frame,
/// of ground-truth objects perceived by both vehicles.
inline BevGrid overlap_mask(const VehicleState& receiver,
                            const Perception& receiver_view,
                            const Perception& helper_view,
                            std::span<const WorldObject> objects) {
  BevGrid mask(receiver_view.grid.origin, receiver_view.grid.cell,
               receiver_view.grid.dim);
  for (std::size_t k : receiver_view.visible) {
    if (std::binary_search(helper_view.visible.begin(),
                           helper_view.visible.end(), k)) {
      rasterize_box(mask, objects[k].box, receiver.perception_radius);
    }
  }
  return mask;
}

/// Precomputed BEV-match data for every in-range ordered pair, so weights
/// can be re-evaluated cheaply when transmission loss changes.
class PriorityEngine {
 public:
  PriorityEngine(const ScenarioState& state,
                 std::span<const WorldObject> objects,
                 std::span<const Perception> views, PriorityMode mode,
                 double comm_range, std::uint64_t seed)
      : n_(state.vehicles.size()), mode_(mode), seed_(seed), pairs_(n_ * n_) {
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (i == j) continue;
        if (distance(state, i, j) > comm_range) continue;
        build_pair(state, objects, views, i, j);
      }
    }
  }

  std::size_t size() const { return n_; }

  /// Weight of helper i at receiver j when a fraction `loss` of the
  /// helper's occupied cells is dropped before fusion.
  double weight(std::size_t i, std::size_t j, double loss = 0.0) const {
    const PairData& pd = pairs_[i * n_ + j];
    if (!pd.in_range || pd.ego_masked == 0) return 0.0;
    std::size_t hits = 0;
    for (const auto& target : pd.targets) {
      for (std::size_t src : target) {
        if (!cell_flipped(seed_, loss_stream(i, j), src, loss)) {
          ++hits;
          break;
        }
      }
    }
    const double m = static_cast<double>(pd.ego_masked);
    const double h = static_cast<double>(hits);
    if (mode_ == PriorityMode::kNormalized) return std::sqrt(h / m);
    return std::sqrt(h) / m;
  }

  /// Weights for all pairs with a per-pair loss fraction.
  PriorityMatrix matrix(const SquareMatrix* loss = nullptr) const {
    PriorityMatrix p(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        if (i != j) p(i, j) = weight(i, j, loss ? (*loss)(i, j) : 0.0);
      }
    }
    return p;
  }

 private:
  struct PairData {
    bool in_range = false;
    std::size_t ego_masked = 0;
    /// For each masked receiver cell that is set in the receiver's BEV, the
    /// helper cells landing on it after alignment.
    std::vector<std::vector<std::size_t>> targets;
  };

  static double distance(const ScenarioState& s, std::size_t i,
                         std::size_t j) {
    const Point2 a = s.vehicles[i].pose.position();
    const Point2 b = s.vehicles[j].pose.position();
    return std::hypot(a.x - b.x, a.y - b.y);
  }

  static std::uint64_t loss_stream(std::size_t i, std::size_t j) {
    return 0x10000000ULL + i * 4096 + j;
  }

  void build_pair(const ScenarioState& state,
                  std::span<const WorldObject> objects,
                  std::span<const Perception> views, std::size_t i,
                  std::size_t j) {
    PairData& pd = pairs_[i * n_ + j];
    pd.in_range = true;
    const BevGrid& ego = views[j].grid;
    const BevGrid mask = overlap_mask(state.vehicles[j], views[j], views[i],
                                      objects);
    std::vector<std::int64_t> slot(ego.cells.size(), -1);
    for (std::size_t k = 0; k < ego.cells.size(); ++k) {
      if (mask.cells[k] && ego.cells[k]) {
        slot[k] = static_cast<std::int64_t>(pd.targets.size());
        pd.targets.emplace_back();
      }
    }
    pd.ego_masked = pd.targets.size();
    if (pd.targets.empty()) return;
    const BevGrid& helper = views[i].grid;
    const RigidTransform t =
        relative_transform(state.vehicles[j].pose, state.vehicles[i].pose);
    for (std::size_t src = 0; src < helper.cells.size(); ++src) {
      if (!helper.cells[src]) continue;
      const std::int64_t dst = ego.locate(t.apply(helper.cell_center(src)));
      if (dst < 0) continue;
      const std::int64_t s = slot[static_cast<std::size_t>(dst)];
      if (s >= 0) pd.targets[static_cast<std::size_t>(s)].push_back(src);
    }
  }

  std::size_t n_;
  PriorityMode mode_;
  std::uint64_t seed_;
  std::vector<PairData> pairs_;
};

/// P(i, j) for every ordered pair within communication range, computed from
/// lossless views; out-of-range pairs get 0.
inline PriorityMatrix priority_matrix(const ScenarioState& state,
                                      std::span<const WorldObject> objects,
                                      std::span<const Perception> views,
                                      PriorityMode mode, double comm_range) {
  return PriorityEngine(state, objects, views, mode, comm_range, 0).matrix();
}

}  // namespace pacp
