// Copyright 2026 The SIMPL Authors
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

#ifndef SIMPL__SCENE__NORMALIZE_HPP_
#define SIMPL__SCENE__NORMALIZE_HPP_

#include "simpl/nn/tensor.hpp"
#include "simpl/scene/anchor.hpp"
#include "simpl/scene/scene.hpp"

#include <cstddef>
#include <vector>

namespace simpl
{
inline constexpr std::size_t kAgentFeatureDim = 3;  // (dx, dy, valid)
inline constexpr std::size_t kMapFeatureDim = 4;    // (x, y, dir_x, dir_y)
inline constexpr std::size_t kMaxPolylinePoints = 10;

/**
 * @brief Express global points in the anchor frame.
 */
inline std::vector<Vec2> to_local(const std::vector<Vec2> & points, const AnchorPose & anchor)
{
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto & p : points) {
    out.push_back(anchor.to_local(p));
  }
  return out;
}

inline std::vector<Vec2> to_global(const std::vector<Vec2> & points, const AnchorPose & anchor)
{
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto & p : points) {
    out.push_back(anchor.to_global(p));
  }
  return out;
}

/**
 * @brief Per-step agent features [H, 3] in the anchor frame.
 *
 * A valid step carries its local displacement since the previous valid step (zero for the first
 * valid step) and flag 1. Invalid steps are zero-filled with flag 0.
 */
inline nn::Tensor<double> normalize_agent(const AgentTrack & track, const AnchorPose & anchor)
{
  const std::size_t h = track.history.size();
  nn::Tensor<double> out({h, kAgentFeatureDim});
  bool have_prev = false;
  Vec2 prev{};
  for (std::size_t s = 0; s < h; ++s) {
    const auto & step = track.history[s];
    if (!step.valid) {
      continue;
    }
    const Vec2 local = anchor.to_local(step.position);
    const Vec2 delta = have_prev ? local - prev : Vec2{};
    out(s, 0) = delta.x;
    out(s, 1) = delta.y;
    out(s, 2) = 1.0;
    prev = local;
    have_prev = true;
  }
  return out;
}

/**
 * @brief Resample to exactly `max_points` points uniformly spaced in arc length when the
 * polyline has more points than that; shorter polylines are returned unchanged.
 */
inline std::vector<Vec2> resample_polyline(const std::vector<Vec2> & points, std::size_t max_points)
{
  expect(max_points >= 2, "resample_polyline: need at least 2 output points");
  if (points.size() <= max_points) {
    return points;
  }
  std::vector<double> arc(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    arc[i] = arc[i - 1] + (points[i] - points[i - 1]).norm();
  }
  const double total = arc.back();
  std::vector<Vec2> out;
  out.reserve(max_points);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < max_points; ++k) {
    if (k + 1 == max_points) {
      out.push_back(points.back());
      break;
    }
    const double s = total * static_cast<double>(k) / static_cast<double>(max_points - 1);
    while (seg + 2 < points.size() && arc[seg + 1] < s) {
      ++seg;
    }
    const double len = arc[seg + 1] - arc[seg];
    const double u = len > 0.0 ? (s - arc[seg]) / len : 0.0;
    out.push_back(points[seg] + (points[seg + 1] - points[seg]) * u);
  }
  return out;
}

/**
 * @brief Per-point map features [P, 4]: local position and local unit direction to the next
 * point (the last point repeats the previous direction). P <= `max_points` after resampling.
 */
inline nn::Tensor<double> normalize_map(
  const MapPolyline & poly, const AnchorPose & anchor, std::size_t max_points = kMaxPolylinePoints)
{
  expect(poly.points.size() >= 2, "polyline '" + poly.id + "' needs at least 2 points");
  const auto local = to_local(resample_polyline(poly.points, max_points), anchor);
  const std::size_t p = local.size();
  nn::Tensor<double> out({p, kMapFeatureDim});
  for (std::size_t i = 0; i < p; ++i) {
    const Vec2 d = i + 1 < p ? local[i + 1] - local[i] : local[i] - local[i - 1];
    const double len = d.norm();
    const Vec2 u = len > 0.0 ? d / len : Vec2{};
    out(i, 0) = local[i].x;
    out(i, 1) = local[i].y;
    out(i, 2) = u.x;
    out(i, 3) = u.y;
  }
  return out;
}
}  // namespace simpl
#endif  // SIMPL__SCENE__NORMALIZE_HPP_
