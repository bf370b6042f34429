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

#ifndef SIMPL__SYNTH__ORACLE_HPP_
#define SIMPL__SYNTH__ORACLE_HPP_

#include "simpl/bezier/bezier.hpp"
#include "simpl/common/exception.hpp"
#include "simpl/model/prediction.hpp"
#include "simpl/scene/anchor.hpp"
#include "simpl/scene/scene.hpp"
#include "simpl/synth/generator.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace simpl::synth
{
/**
 * @brief Lane-following reference predictor: snaps the history to the nearest lane, fits
 * arc length against time, and extrapolates at the fitted speed. One mode with score 1.
 */
inline PredictionSet oracle_predictor(const Scene & scene)
{
  validate_scene(scene);
  expect(!scene.map_elements.empty(), "oracle_predictor: scene has no lanes");
  PredictionSet set{scene.scenario_id, {}};
  for (const auto & agent : scene.agents) {
    const MapPolyline * lane = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto & poly : scene.map_elements) {
      if (poly.kind != MapKind::LaneCenterline) {
        continue;
      }
      double acc = 0.0;
      for (const auto & h : agent.history) {
        if (h.valid) {
          acc += project(poly.points, h.position).distance;
        }
      }
      if (acc < best) {
        best = acc;
        lane = &poly;
      }
    }
    expect(lane != nullptr, "oracle_predictor: scene has no lane centerlines");

    // Least-squares line s(t) = s0 + v t over the valid history, t = 0 at observation.
    double st = 0.0, ss = 0.0, stt = 0.0, sts = 0.0, n = 0.0;
    const std::size_t h_len = agent.history.size();
    for (std::size_t h = 0; h < h_len; ++h) {
      if (!agent.history[h].valid) {
        continue;
      }
      const double t = -static_cast<double>(h_len - 1 - h) * scene.dt;
      const double s = project(lane->points, agent.history[h].position).arc;
      st += t;
      ss += s;
      stt += t * t;
      sts += t * s;
      n += 1.0;
    }
    double speed = 0.0;
    double s0 = ss / n;
    const double den = n * stt - st * st;
    if (n >= 2.0 && den > 0.0) {
      speed = (n * sts - st * ss) / den;
      s0 = (ss - speed * st) / n;
    }

    ModeOutput mode;
    mode.score = 1.0;
    std::vector<Vec2> vel;
    for (std::size_t s = 1; s <= scene.future_len; ++s) {
      const auto [p, dir] = point_at(lane->points, s0 + speed * static_cast<double>(s) * scene.dt);
      mode.positions.push_back(p);
      vel.push_back(dir * speed);
    }
    const auto anchor = build_anchor_pose_agent(agent);
    mode.velocities = vel;
    mode.yaws = bezier::yaw_from_velocity(vel, anchor.heading);
    set.agents.push_back({agent.id, anchor, {std::move(mode)}});
  }
  return set;
}
}  // namespace simpl::synth
#endif  // SIMPL__SYNTH__ORACLE_HPP_
