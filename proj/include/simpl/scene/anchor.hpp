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

#ifndef SIMPL__SCENE__ANCHOR_HPP_
#define SIMPL__SCENE__ANCHOR_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/common/geometry.hpp"
#include "simpl/scene/scene.hpp"

#include <cstddef>
#include <vector>

namespace simpl
{
/**
 * @brief Local reference frame of an instance: origin `position`, x-axis along unit `heading`.
 */
struct AnchorPose
{
  Vec2 position;
  Vec2 heading{1.0, 0.0};

  Vec2 rotate_to_local(const Vec2 & v) const noexcept
  {
    return {heading.x * v.x + heading.y * v.y, -heading.y * v.x + heading.x * v.y};
  }
  Vec2 rotate_to_global(const Vec2 & v) const noexcept
  {
    return {heading.x * v.x - heading.y * v.y, heading.y * v.x + heading.x * v.y};
  }
  Vec2 to_local(const Vec2 & p) const noexcept { return rotate_to_local(p - position); }
  Vec2 to_global(const Vec2 & p) const noexcept { return rotate_to_global(p) + position; }

  AnchorPose transformed(const RigidTransform2 & tf) const
  {
    return {tf.apply(position), tf.rotate(heading)};
  }
};

inline constexpr Vec2 kFallbackHeading{1.0, 0.0};
inline constexpr double kStationaryDisplacement = 0.1;  // m
inline constexpr std::size_t kHeadingWindow = 5;        // valid steps

/**
 * @brief Anchor at the observed (last) position, heading along recent motion.
 *
 * The heading is the direction from the earliest to the latest of the final five valid steps.
 * Agents whose valid history moves less than 0.1 m in total get the fallback heading (1, 0).
 */
inline AnchorPose build_anchor_pose_agent(const AgentTrack & track)
{
  std::vector<Vec2> valid;
  for (const auto & h : track.history) {
    if (h.valid) {
      valid.push_back(h.position);
    }
  }
  if (valid.empty() || !track.history.back().valid) {
    throw SimplException(
      SimplError_t::InvalidInput, "agent '" + track.id + "' has no valid observation step");
  }
  AnchorPose pose{valid.back(), kFallbackHeading};
  if ((valid.back() - valid.front()).norm() < kStationaryDisplacement) {
    return pose;
  }
  const std::size_t first = valid.size() > kHeadingWindow ? valid.size() - kHeadingWindow : 0;
  const Vec2 disp = valid.back() - valid[first];
  const double len = disp.norm();
  if (len > 1e-9) {
    pose.heading = disp / len;
  }
  return pose;
}

/**
 * @brief Anchor at the polyline centroid, heading along the endpoint displacement.
 *
 * @param degenerate Set to true when the endpoints coincide and the fallback heading is used.
 */
inline AnchorPose build_anchor_pose_map(const MapPolyline & poly, bool * degenerate = nullptr)
{
  expect(poly.points.size() >= 2, "polyline '" + poly.id + "' needs at least 2 points");
  Vec2 centroid{};
  for (const auto & p : poly.points) {
    centroid = centroid + p;
  }
  centroid = centroid / static_cast<double>(poly.points.size());
  const Vec2 disp = poly.points.back() - poly.points.front();
  const double len = disp.norm();
  const bool deg = len <= kMinPointSpacing;
  if (degenerate) {
    *degenerate = deg;
  }
  return {centroid, deg ? kFallbackHeading : disp / len};
}

/**
 * @brief Anchors of every instance in token order: agents first, then map elements.
 */
inline std::vector<AnchorPose> build_scene_anchors(const Scene & scene)
{
  std::vector<AnchorPose> anchors;
  anchors.reserve(scene.num_instances());
  for (const auto & a : scene.agents) {
    anchors.push_back(build_anchor_pose_agent(a));
  }
  for (const auto & m : scene.map_elements) {
    anchors.push_back(build_anchor_pose_map(m));
  }
  return anchors;
}
}  // namespace simpl
#endif  // SIMPL__SCENE__ANCHOR_HPP_
