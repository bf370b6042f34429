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

#ifndef SIMPL__TRAIN__LOSSES_HPP_
#define SIMPL__TRAIN__LOSSES_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/model/decoder.hpp"
#include "simpl/nn/ops.hpp"
#include "simpl/scene/anchor.hpp"
#include "simpl/scene/ground_truth.hpp"
#include "simpl/scene/scene.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace simpl::train
{
struct LossConfig
{
  double omega{0.8};
  double margin{0.2};
  double smooth_l1_beta{1.0};  // m
  bool yaw_loss{true};
};

/**
 * @brief Scalar loss values, averaged over agents.
 */
struct LossBreakdown
{
  double total{0.0};
  double reg_pos{0.0};
  double reg_yaw{0.0};
  double cls{0.0};
  double min_fde{0.0};  //!< endpoint error of the winning modes, m
  std::vector<std::size_t> winners;
  std::size_t agents{0};
};

/**
 * @brief Mode whose endpoint is closest to `gt_end`; ties go to the smallest index.
 */
inline std::size_t select_winner(std::span<const Vec2> endpoints, const Vec2 & gt_end)
{
  expect(!endpoints.empty(), "select_winner: no modes");
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < endpoints.size(); ++k) {
    const double d = (endpoints[k] - gt_end).norm();
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

/**
 * @brief Supervision for one scene, expressed in each agent's local frame.
 */
struct SceneTargets
{
  std::vector<std::size_t> agents;  //!< agent indices with a full future
  std::vector<std::vector<Vec2>> positions;
  std::vector<std::vector<Vec2>> yaws;
};

inline SceneTargets build_targets(const Scene & scene, const std::vector<AnchorPose> & anchors)
{
  SceneTargets tg;
  for (std::size_t a = 0; a < scene.agents.size(); ++a) {
    const auto & agent = scene.agents[a];
    if (!agent.future || agent.future->size() != scene.future_len) {
      continue;
    }
    const auto & anchor = anchors[a];
    const auto yaw = future_yaws(*agent.future, scene.dt, anchor.heading);
    std::vector<Vec2> pl;
    std::vector<Vec2> yl;
    for (std::size_t s = 0; s < agent.future->size(); ++s) {
      pl.push_back(anchor.to_local((*agent.future)[s]));
      yl.push_back(anchor.rotate_to_local(yaw[s]));
    }
    tg.agents.push_back(a);
    tg.positions.push_back(std::move(pl));
    tg.yaws.push_back(std::move(yl));
  }
  return tg;
}

template <typename T>
struct SceneLoss
{
  nn::Var<T> total;  //!< mean over the scene's supervised agents
  LossBreakdown parts;
};

/**
 * @brief Winner-takes-all regression plus max-margin classification for one decoded scene.
 */
template <typename T>
SceneLoss<T> scene_loss(
  nn::Tape<T> & tape, const DecoderOutput<T> & out, const SceneTargets & tg, const LossConfig & cfg)
{
  const std::size_t modes = out.scores.shape()[1];
  const std::size_t steps = out.positions.shape()[1];
  const std::size_t batch = tg.agents.size();
  SceneLoss<T> res{tape.constant(nn::Tensor<T>({1}, {T(0)})), {}};
  res.parts.agents = batch;
  if (batch == 0) {
    return res;
  }

  const auto & pv = out.positions.value();
  std::vector<std::size_t> rows;
  nn::Tensor<T> pos_target({batch, steps, 2});
  nn::Tensor<T> yaw_target({batch, steps, 2});
  for (std::size_t b = 0; b < batch; ++b) {
    expect(tg.positions[b].size() == steps, "scene_loss: ground-truth horizon mismatch");
    std::vector<Vec2> ends(modes);
    for (std::size_t k = 0; k < modes; ++k) {
      const std::size_t r = tg.agents[b] * modes + k;
      ends[k] = {static_cast<double>(pv(r, steps - 1, 0)), static_cast<double>(pv(r, steps - 1, 1))};
    }
    const std::size_t win = select_winner(ends, tg.positions[b].back());
    res.parts.winners.push_back(win);
    res.parts.min_fde += (ends[win] - tg.positions[b].back()).norm() / static_cast<double>(batch);
    rows.push_back(tg.agents[b] * modes + win);
    for (std::size_t s = 0; s < steps; ++s) {
      pos_target(b, s, 0) = static_cast<T>(tg.positions[b][s].x);
      pos_target(b, s, 1) = static_cast<T>(tg.positions[b][s].y);
      yaw_target(b, s, 0) = static_cast<T>(tg.yaws[b][s].x);
      yaw_target(b, s, 1) = static_cast<T>(tg.yaws[b][s].y);
    }
  }

  const auto pos = nn::smooth_l1_loss(
    nn::gather_rows(out.positions, rows), pos_target, static_cast<T>(cfg.smooth_l1_beta));
  const auto cls = nn::max_margin_loss(
    nn::gather_rows(out.scores, tg.agents), res.parts.winners, static_cast<T>(cfg.margin));
  const T w = static_cast<T>(cfg.omega);
  std::vector<nn::Var<T>> terms{pos, cls};
  std::vector<T> weights{w, T(1) - w};
  if (cfg.yaw_loss) {
    const auto yaw = nn::cosine_yaw_loss(nn::gather_rows(out.yaws, rows), yaw_target);
    terms.push_back(yaw);
    weights.push_back(w);
    res.parts.reg_yaw = static_cast<double>(yaw.value()[0]);
  }
  res.total = nn::weighted_sum(terms, weights);
  res.parts.reg_pos = static_cast<double>(pos.value()[0]);
  res.parts.cls = static_cast<double>(cls.value()[0]);
  res.parts.total = static_cast<double>(res.total.value()[0]);
  return res;
}

/**
 * @brief Agent-weighted mean of per-scene breakdowns.
 */
inline LossBreakdown combine(const std::vector<LossBreakdown> & parts)
{
  LossBreakdown out;
  for (const auto & p : parts) {
    const double n = static_cast<double>(p.agents);
    out.total += n * p.total;
    out.reg_pos += n * p.reg_pos;
    out.reg_yaw += n * p.reg_yaw;
    out.cls += n * p.cls;
    out.min_fde += n * p.min_fde;
    out.agents += p.agents;
    out.winners.insert(out.winners.end(), p.winners.begin(), p.winners.end());
  }
  if (out.agents > 0) {
    const double n = static_cast<double>(out.agents);
    out.total /= n;
    out.reg_pos /= n;
    out.reg_yaw /= n;
    out.cls /= n;
    out.min_fde /= n;
  }
  return out;
}
}  // namespace simpl::train
#endif  // SIMPL__TRAIN__LOSSES_HPP_
