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

#ifndef SIMPL__METRICS__METRICS_HPP_
#define SIMPL__METRICS__METRICS_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/model/prediction.hpp"
#include "simpl/scene/anchor.hpp"
#include "simpl/scene/ground_truth.hpp"
#include "simpl/scene/scene.hpp"

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace simpl::metrics
{
using Trajectory = std::vector<Vec2>;

inline constexpr double kMissThreshold = 2.0;  // m

namespace detail
{
inline void check_shapes(const std::vector<Trajectory> & pred, const Trajectory & gt)
{
  expect(!pred.empty(), "metrics: no predicted modes");
  expect(!gt.empty(), "metrics: empty ground truth");
  for (const auto & p : pred) {
    expect(p.size() == gt.size(), "metrics: prediction/ground-truth length mismatch");
  }
}
}  // namespace detail

inline double min_ade(const std::vector<Trajectory> & pred, const Trajectory & gt)
{
  detail::check_shapes(pred, gt);
  double best = std::numeric_limits<double>::infinity();
  for (const auto & p : pred) {
    double acc = 0.0;
    for (std::size_t t = 0; t < gt.size(); ++t) {
      acc += (p[t] - gt[t]).norm();
    }
    best = std::min(best, acc / static_cast<double>(gt.size()));
  }
  return best;
}

/**
 * @brief Index of the mode with the smallest endpoint error; ties go to the smallest index.
 */
inline std::size_t best_mode(const std::vector<Trajectory> & pred, const Trajectory & gt)
{
  detail::check_shapes(pred, gt);
  std::size_t best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double err = (pred[k].back() - gt.back()).norm();
    if (err < best_err) {
      best_err = err;
      best = k;
    }
  }
  return best;
}

inline double min_fde(const std::vector<Trajectory> & pred, const Trajectory & gt)
{
  return (pred[best_mode(pred, gt)].back() - gt.back()).norm();
}

/**
 * @brief Fraction of agents whose minFDE is strictly greater than `threshold`.
 */
inline double miss_rate(std::span<const double> min_fdes, double threshold = kMissThreshold)
{
  if (min_fdes.empty()) {
    return 0.0;
  }
  std::size_t misses = 0;
  for (double v : min_fdes) {
    misses += v > threshold ? 1 : 0;
  }
  return static_cast<double>(misses) / static_cast<double>(min_fdes.size());
}

inline double brier_min_fde(
  const std::vector<Trajectory> & pred, std::span<const double> scores, const Trajectory & gt)
{
  expect(scores.size() == pred.size(), "brier_min_fde: one score per mode required");
  const std::size_t k = best_mode(pred, gt);
  const double p = scores[k];
  return (pred[k].back() - gt.back()).norm() + (1.0 - p) * (1.0 - p);
}

/**
 * @brief Wrap an angle into (-pi, pi].
 */
inline double wrap_angle(double a)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) {
    r += two_pi;
  }
  return r;
}

inline double yaw_angle(const Vec2 & v) { return std::atan2(v.y, v.x); }

struct YawErrors
{
  double average{0.0};  //!< minAYE, rad
  double final{0.0};    //!< minFYE, rad
};

/**
 * @brief Absolute wrapped heading error of mode `mode` (the FDE-best mode), averaged over
 * steps and at the final step.
 */
inline YawErrors yaw_errors(
  const std::vector<Trajectory> & pred_yaws, const Trajectory & gt_yaws, std::size_t mode)
{
  expect(mode < pred_yaws.size(), "yaw_errors: mode index out of range");
  const auto & p = pred_yaws[mode];
  expect(p.size() == gt_yaws.size() && !p.empty(), "yaw_errors: length mismatch");
  YawErrors e;
  for (std::size_t t = 0; t < p.size(); ++t) {
    const double err = std::abs(wrap_angle(yaw_angle(p[t]) - yaw_angle(gt_yaws[t])));
    e.average += err;
    if (t + 1 == p.size()) {
      e.final = err;
    }
  }
  e.average /= static_cast<double>(p.size());
  return e;
}

/**
 * @brief Per-agent evaluation record.
 */
struct AgentMetrics
{
  std::string scenario_id;
  std::string agent_id;
  double min_ade{0.0};
  double min_fde{0.0};
  bool miss{false};
  double brier_min_fde{0.0};
  double min_aye{0.0};
  double min_fye{0.0};
  std::size_t best_mode{0};
};

struct MetricReport
{
  std::size_t agent_count{0};
  std::size_t k{0};
  double min_ade{0.0};
  double min_fde{0.0};
  double miss_rate{0.0};
  double brier_min_fde{0.0};
  double min_aye{0.0};
  double min_fye{0.0};
};

inline AgentMetrics evaluate_agent(
  const AgentPrediction & pred, const AgentTrack & track, double dt, const std::string & scenario_id = "")
{
  expect(track.future.has_value(), "agent '" + track.id + "' has no ground-truth future");
  const auto & gt = *track.future;
  std::vector<Trajectory> pos;
  std::vector<Trajectory> yaws;
  std::vector<double> scores;
  for (const auto & m : pred.modes) {
    pos.push_back(m.positions);
    yaws.push_back(m.yaws);
    scores.push_back(m.score);
  }
  AgentMetrics r;
  r.scenario_id = scenario_id;
  r.agent_id = track.id;
  r.min_ade = min_ade(pos, gt);
  r.best_mode = best_mode(pos, gt);
  r.min_fde = min_fde(pos, gt);
  r.miss = r.min_fde > kMissThreshold;
  r.brier_min_fde = brier_min_fde(pos, scores, gt);
  const auto gt_yaw = future_yaws(gt, dt, build_anchor_pose_agent(track).heading);
  const auto ye = yaw_errors(yaws, gt_yaw, r.best_mode);
  r.min_aye = ye.average;
  r.min_fye = ye.final;
  return r;
}

/**
 * @brief Evaluate the agents flagged as targets that have a complete ground-truth future.
 */
inline std::vector<AgentMetrics> evaluate_scene(const PredictionSet & pred, const Scene & scene)
{
  std::vector<AgentMetrics> rows;
  for (const auto & agent : scene.agents) {
    if (!agent.is_target || !agent.future || agent.future->size() != scene.future_len) {
      continue;
    }
    const auto * p = pred.find(agent.id);
    if (p == nullptr) {
      throw SimplException(
        SimplError_t::InvalidInput,
        "no prediction for target agent '" + agent.id + "' in scene '" + scene.scenario_id + "'");
    }
    rows.push_back(evaluate_agent(*p, agent, scene.dt, scene.scenario_id));
  }
  return rows;
}

inline MetricReport aggregate(const std::vector<AgentMetrics> & rows, std::size_t k)
{
  MetricReport r;
  r.agent_count = rows.size();
  r.k = k;
  if (rows.empty()) {
    return r;
  }
  std::vector<double> fdes;
  for (const auto & m : rows) {
    r.min_ade += m.min_ade;
    r.min_fde += m.min_fde;
    r.brier_min_fde += m.brier_min_fde;
    r.min_aye += m.min_aye;
    r.min_fye += m.min_fye;
    fdes.push_back(m.min_fde);
  }
  const double n = static_cast<double>(rows.size());
  r.min_ade /= n;
  r.min_fde /= n;
  r.brier_min_fde /= n;
  r.min_aye /= n;
  r.min_fye /= n;
  r.miss_rate = miss_rate(fdes);
  return r;
}

/**
 * @brief One row per scene-agent plus a final `ALL` aggregate row.
 */
inline std::string to_csv(const std::vector<AgentMetrics> & rows, const MetricReport & report)
{
  std::ostringstream os;
  os << std::setprecision(17);
  os << "scenario_id,agent_id,k,min_ade,min_fde,miss_rate,brier_min_fde,min_aye,min_fye\n";
  for (const auto & m : rows) {
    os << m.scenario_id << ',' << m.agent_id << ',' << report.k << ',' << m.min_ade << ','
       << m.min_fde << ',' << (m.miss ? 1 : 0) << ',' << m.brier_min_fde << ',' << m.min_aye << ','
       << m.min_fye << '\n';
  }
  os << "ALL," << report.agent_count << ',' << report.k << ',' << report.min_ade << ','
     << report.min_fde << ',' << report.miss_rate << ',' << report.brier_min_fde << ','
     << report.min_aye << ',' << report.min_fye << '\n';
  return os.str();
}
}  // namespace simpl::metrics
#endif  // SIMPL__METRICS__METRICS_HPP_
