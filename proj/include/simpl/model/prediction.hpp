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

#ifndef SIMPL__MODEL__PREDICTION_HPP_
#define SIMPL__MODEL__PREDICTION_HPP_

#include "simpl/model/simpl_net.hpp"
#include "simpl/scene/scene.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace simpl
{
/**
 * @brief One trajectory hypothesis. Control points stay in the agent's local frame; sampled
 * states are in the global frame.
 */
struct ModeOutput
{
  double score{0.0};
  std::vector<Vec2> control_points;  //!< n + 1 points, local frame.
  std::vector<Vec2> positions;       //!< T points, m.
  std::vector<Vec2> velocities;      //!< T vectors, m/s.
  std::vector<Vec2> yaws;            //!< T unit vectors.
};

struct AgentPrediction
{
  std::string agent_id;
  AnchorPose anchor;
  std::vector<ModeOutput> modes;
};

struct PredictionSet
{
  std::string scenario_id;
  std::vector<AgentPrediction> agents;

  const AgentPrediction * find(const std::string & agent_id) const
  {
    for (const auto & a : agents) {
      if (a.agent_id == agent_id) {
        return &a;
      }
    }
    return nullptr;
  }
};

/**
 * @brief Convert decoder values of agent `a` into a global-frame prediction.
 */
template <typename T>
AgentPrediction restore_agent(
  const DecoderOutput<T> & out, std::size_t a, const AnchorPose & anchor, const std::string & agent_id)
{
  const auto & cp = out.control_points.value();
  const auto & sc = out.scores.value();
  const auto & pos = out.positions.value();
  const auto & vel = out.velocities.value();
  const auto & yaw = out.yaws.value();
  const std::size_t modes = sc.dim(1);
  const std::size_t ncp = cp.dim(1);
  const std::size_t steps = pos.dim(1);
  AgentPrediction pred{agent_id, anchor, {}};
  for (std::size_t k = 0; k < modes; ++k) {
    const std::size_t row = a * modes + k;
    ModeOutput m;
    m.score = static_cast<double>(sc(a, k));
    for (std::size_t i = 0; i < ncp; ++i) {
      m.control_points.push_back({static_cast<double>(cp(row, i, 0)), static_cast<double>(cp(row, i, 1))});
    }
    for (std::size_t s = 0; s < steps; ++s) {
      const Vec2 p{static_cast<double>(pos(row, s, 0)), static_cast<double>(pos(row, s, 1))};
      const Vec2 v{static_cast<double>(vel(row, s, 0)), static_cast<double>(vel(row, s, 1))};
      const Vec2 y{static_cast<double>(yaw(row, s, 0)), static_cast<double>(yaw(row, s, 1))};
      m.positions.push_back(anchor.to_global(p));
      m.velocities.push_back(anchor.rotate_to_global(v));
      m.yaws.push_back(anchor.rotate_to_global(y));
    }
    pred.modes.push_back(std::move(m));
  }
  return pred;
}

/**
 * @brief Decode a single fused actor token [D].
 */
template <typename T>
AgentPrediction decode_agent(
  const MotionDecoder<T> & decoder, const nn::Tensor<T> & token, const AnchorPose & anchor,
  const std::string & agent_id)
{
  nn::Tape<T> tape(false);
  nn::Tensor<T> row({1, token.size()}, token.storage());
  const auto out = decoder(tape.constant(std::move(row)));
  return restore_agent(out, 0, anchor, agent_id);
}

/**
 * @brief Decode all agents from fused actor tokens [N_a, D] in one batched pass.
 */
template <typename T>
PredictionSet decode_all(
  const MotionDecoder<T> & decoder, const nn::Tensor<T> & tokens, const std::vector<AnchorPose> & anchors,
  const std::vector<std::string> & agent_ids, const std::string & scenario_id = "")
{
  expect(tokens.dim(0) == agent_ids.size() && anchors.size() >= agent_ids.size(), "decode_all: size mismatch");
  nn::Tape<T> tape(false);
  const auto out = decoder(tape.constant(tokens));
  PredictionSet set{scenario_id, {}};
  for (std::size_t a = 0; a < agent_ids.size(); ++a) {
    set.agents.push_back(restore_agent(out, a, anchors[a], agent_ids[a]));
  }
  return set;
}

/**
 * @brief Single-pass prediction for every agent in the scene.
 */
template <typename T>
PredictionSet predict(const Model<T> & model, const Scene & scene)
{
  validate_scene(scene);
  const auto inputs = prepare_scene(scene);
  nn::Tape<T> tape(false);
  const auto out = model.net().forward(tape, inputs);
  for (const auto * v : {&out.positions, &out.scores}) {
    if (!v->value().all_finite()) {
      throw SimplException(
        SimplError_t::NumericFailure, "non-finite prediction for scene '" + scene.scenario_id + "'");
    }
  }
  PredictionSet set{scene.scenario_id, {}};
  for (std::size_t a = 0; a < scene.agents.size(); ++a) {
    set.agents.push_back(restore_agent(out, a, inputs.anchors[a], scene.agents[a].id));
  }
  return set;
}
}  // namespace simpl
#endif  // SIMPL__MODEL__PREDICTION_HPP_
