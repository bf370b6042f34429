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

#ifndef SIMPL__SCENE__SCENE_HPP_
#define SIMPL__SCENE__SCENE_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/common/geometry.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace simpl
{
enum class AgentKind { Vehicle, Pedestrian, Cyclist, Other };

enum class MapKind { LaneCenterline, Boundary };

struct HistoryPoint
{
  Vec2 position;
  bool valid{true};
};

/**
 * @brief Observed track of one agent in the global frame.
 */
struct AgentTrack
{
  std::string id;
  AgentKind kind{AgentKind::Vehicle};
  std::vector<HistoryPoint> history;        //!< Exactly H steps, last one observed at t = 0.
  std::optional<std::vector<Vec2>> future;  //!< T steps, present for training scenes only.
  bool is_target{false};                    //!< Gates evaluation only, never encoding.
};

struct MapPolyline
{
  std::string id;
  MapKind kind{MapKind::LaneCenterline};
  std::vector<Vec2> points;
};

struct Scene
{
  std::string scenario_id;
  double dt{0.1};
  std::size_t history_len{0};
  std::size_t future_len{0};
  std::vector<AgentTrack> agents;
  std::vector<MapPolyline> map_elements;

  std::size_t num_instances() const noexcept { return agents.size() + map_elements.size(); }
};

inline constexpr double kMinPointSpacing = 1e-6;

/**
 * @brief Throw `InvalidInput` unless every scene invariant holds.
 */
inline void validate_scene(const Scene & scene)
{
  const std::string where = "scene '" + scene.scenario_id + "': ";
  expect(!scene.agents.empty(), where + "at least one agent is required");
  expect(scene.dt > 0.0 && std::isfinite(scene.dt), where + "dt must be positive");
  expect(scene.history_len > 0, where + "history_len must be positive");
  expect(scene.future_len > 0, where + "future_len must be positive");
  for (const auto & agent : scene.agents) {
    const std::string aw = where + "agent '" + agent.id + "': ";
    expect(agent.history.size() == scene.history_len, aw + "history length mismatch");
    expect(agent.history.back().valid, aw + "observation step must be valid");
    for (const auto & h : agent.history) {
      expect(
        !h.valid || (std::isfinite(h.position.x) && std::isfinite(h.position.y)),
        aw + "non-finite history point");
    }
    if (agent.future) {
      expect(agent.future->size() == scene.future_len, aw + "future length mismatch");
      for (const auto & p : *agent.future) {
        expect(std::isfinite(p.x) && std::isfinite(p.y), aw + "non-finite future point");
      }
    }
  }
  for (const auto & poly : scene.map_elements) {
    const std::string pw = where + "polyline '" + poly.id + "': ";
    expect(poly.points.size() >= 2, pw + "needs at least 2 points");
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
      expect(
        std::isfinite(poly.points[i].x) && std::isfinite(poly.points[i].y),
        pw + "non-finite point");
      if (i > 0) {
        expect(
          (poly.points[i] - poly.points[i - 1]).norm() > kMinPointSpacing,
          pw + "coincident consecutive points");
      }
    }
  }
}

/**
 * @brief Apply a rigid transform to every coordinate of the scene.
 */
inline Scene transform_scene(const Scene & scene, const RigidTransform2 & tf)
{
  Scene out = scene;
  for (auto & agent : out.agents) {
    for (auto & h : agent.history) {
      h.position = tf.apply(h.position);
    }
    if (agent.future) {
      for (auto & p : *agent.future) {
        p = tf.apply(p);
      }
    }
  }
  for (auto & poly : out.map_elements) {
    for (auto & p : poly.points) {
      p = tf.apply(p);
    }
  }
  return out;
}
}  // namespace simpl
#endif  // SIMPL__SCENE__SCENE_HPP_
