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

#ifndef SIMPL__STUDY__BENCH_HPP_
#define SIMPL__STUDY__BENCH_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/model/prediction.hpp"
#include "simpl/scene/anchor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace simpl::study
{
inline constexpr std::size_t kWarmupRuns = 3;
inline constexpr std::size_t kMinRepeats = 20;

inline double median(std::vector<double> v)
{
  expect(!v.empty(), "median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/**
 * @brief Linear-interpolated percentile, q in [0, 100].
 */
inline double percentile(std::vector<double> v, double q)
{
  expect(!v.empty(), "percentile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

/**
 * @brief Median wall-clock milliseconds of `fn` after warm-up runs.
 */
inline double time_median_ms(const std::function<void()> & fn, std::size_t repeats, std::size_t warmups = kWarmupRuns)
{
  for (std::size_t i = 0; i < warmups; ++i) {
    fn();
  }
  std::vector<double> ms;
  for (std::size_t i = 0; i < std::max<std::size_t>(repeats, 1); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return median(ms);
}

/**
 * @brief Copy of `scene` with only the first `count` agents flagged as targets.
 */
inline Scene with_targets(const Scene & scene, std::size_t count)
{
  Scene out = scene;
  for (std::size_t a = 0; a < out.agents.size(); ++a) {
    out.agents[a].is_target = a < count;
  }
  return out;
}

/**
 * @brief Agent-centric emulation: the whole scene is re-expressed in each target's frame and
 * encoded once per target; only that target's prediction is kept.
 */
template <typename T>
PredictionSet predict_agent_centric(const Model<T> & model, const Scene & scene)
{
  PredictionSet set{scene.scenario_id, {}};
  for (const auto & agent : scene.agents) {
    if (!agent.is_target) {
      continue;
    }
    const auto pose = build_anchor_pose_agent(agent);
    const double theta = std::atan2(pose.heading.y, pose.heading.x);
    const RigidTransform2 to_local{-theta, RigidTransform2{-theta, {}}.rotate(pose.position * -1.0)};
    const auto local = predict(model, transform_scene(scene, to_local));
    const auto * p = local.find(agent.id);
    const RigidTransform2 back{theta, pose.position};
    AgentPrediction g{agent.id, pose, p->modes};
    for (auto & m : g.modes) {
      for (auto & x : m.positions) {
        x = back.apply(x);
      }
      for (auto & v : m.velocities) {
        v = back.rotate(v);
      }
      for (auto & y : m.yaws) {
        y = back.rotate(y);
      }
    }
    set.agents.push_back(std::move(g));
  }
  return set;
}

struct BenchRow
{
  std::string scene_id;
  std::string mode;  //!< "single_pass" or "agent_centric"
  std::size_t targets{0};
  std::size_t tokens{0};
  std::size_t agents{0};
  double wall_ms{0.0};
};

template <typename T>
BenchRow bench_single_pass(const Model<T> & model, const Scene & scene, std::size_t repeats)
{
  std::size_t targets = 0;
  for (const auto & a : scene.agents) {
    targets += a.is_target ? 1 : 0;
  }
  const double ms = time_median_ms([&] { (void)predict(model, scene); }, repeats);
  return {scene.scenario_id, "single_pass", targets, scene.num_instances(), scene.agents.size(), ms};
}

/**
 * @brief Single-pass latency for 1..N_a flagged targets. Repeats are taken round-robin across
 * the target counts so slow drift in machine load affects every count alike.
 */
template <typename T>
std::vector<BenchRow> bench_single_pass_sweep(const Model<T> & model, const Scene & scene, std::size_t repeats)
{
  const std::size_t na = scene.agents.size();
  std::vector<Scene> variants;
  for (std::size_t n = 1; n <= na; ++n) {
    variants.push_back(with_targets(scene, n));
  }
  for (std::size_t w = 0; w < kWarmupRuns; ++w) {
    (void)predict(model, variants[w % na]);
  }
  std::vector<std::vector<double>> ms(na);
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    for (std::size_t i = 0; i < na; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      (void)predict(model, variants[i]);
      ms[i].push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
  }
  std::vector<BenchRow> rows;
  for (std::size_t i = 0; i < na; ++i) {
    rows.push_back({scene.scenario_id, "single_pass", i + 1, scene.num_instances(), na, median(ms[i])});
  }
  return rows;
}

template <typename T>
BenchRow bench_agent_centric(const Model<T> & model, const Scene & scene, std::size_t targets, std::size_t repeats)
{
  const Scene s = with_targets(scene, targets);
  const double ms = time_median_ms([&] { (void)predict_agent_centric(model, s); }, repeats);
  return {scene.scenario_id, "agent_centric", targets, scene.num_instances(), scene.agents.size(), ms};
}

inline std::string bench_csv(const std::vector<BenchRow> & rows)
{
  std::ostringstream os;
  os << "scene_id,mode,n_targets,n_tokens,n_agents,wall_ms\n" << std::setprecision(6);
  for (const auto & r : rows) {
    os << r.scene_id << ',' << r.mode << ',' << r.targets << ',' << r.tokens << ',' << r.agents << ','
       << r.wall_ms << '\n';
  }
  return os.str();
}
}  // namespace simpl::study
#endif  // SIMPL__STUDY__BENCH_HPP_
