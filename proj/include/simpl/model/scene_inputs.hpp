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

#ifndef SIMPL__MODEL__SCENE_INPUTS_HPP_
#define SIMPL__MODEL__SCENE_INPUTS_HPP_

#include "simpl/nn/tensor.hpp"
#include "simpl/scene/anchor.hpp"
#include "simpl/scene/normalize.hpp"
#include "simpl/scene/rel_pose.hpp"
#include "simpl/scene/scene.hpp"

#include <cstddef>
#include <vector>

namespace simpl
{
/**
 * @brief Everything the network consumes for one scene. Only local and relative quantities
 * appear here; global coordinates survive only in `anchors`, which the network never reads.
 */
struct SceneInputs
{
  std::vector<AnchorPose> anchors;       //!< N = N_a + N_m, agents first.
  nn::Tensor<double> actor_features;     //!< [N_a, H, 3]
  nn::Tensor<double> map_features;       //!< [P_total, 4], polylines back to back.
  std::vector<std::size_t> map_offsets;  //!< N_m + 1 row offsets into `map_features`.
  nn::Tensor<double> rel_pose;           //!< [N, N, 5]
  std::size_t num_agents{0};
  std::size_t num_map{0};

  std::size_t num_tokens() const noexcept { return num_agents + num_map; }
};

inline SceneInputs prepare_scene(const Scene & scene, std::size_t max_points = kMaxPolylinePoints)
{
  SceneInputs in;
  in.num_agents = scene.agents.size();
  in.num_map = scene.map_elements.size();
  in.anchors = build_scene_anchors(scene);

  const std::size_t h = scene.history_len;
  in.actor_features = nn::Tensor<double>({in.num_agents, h, kAgentFeatureDim});
  for (std::size_t a = 0; a < in.num_agents; ++a) {
    const auto f = normalize_agent(scene.agents[a], in.anchors[a]);
    expect(f.dim(0) == h, "agent '" + scene.agents[a].id + "' history length mismatch");
    std::copy(f.values().begin(), f.values().end(), in.actor_features.data() + a * h * kAgentFeatureDim);
  }

  std::vector<double> points;
  in.map_offsets.push_back(0);
  for (std::size_t m = 0; m < in.num_map; ++m) {
    const auto f = normalize_map(scene.map_elements[m], in.anchors[in.num_agents + m], max_points);
    points.insert(points.end(), f.values().begin(), f.values().end());
    in.map_offsets.push_back(in.map_offsets.back() + f.dim(0));
  }
  in.map_features = nn::Tensor<double>({in.map_offsets.back(), kMapFeatureDim}, std::move(points));
  in.rel_pose = compute_rel_pose_tensor(in.anchors);
  return in;
}
}  // namespace simpl
#endif  // SIMPL__MODEL__SCENE_INPUTS_HPP_
