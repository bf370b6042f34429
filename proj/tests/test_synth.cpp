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

#include "simpl/metrics/metrics.hpp"
#include "simpl/scene/scene_io.hpp"
#include "simpl/synth/generator.hpp"
#include "simpl/synth/oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

using namespace simpl;
using namespace simpl::synth;
namespace fs = std::filesystem;

namespace
{
fs::path scratch(const std::string & name)
{
  const auto p = fs::temp_directory_path() / name;
  fs::remove_all(p);
  return p;
}

double polyline_length(const std::vector<Vec2> & pts)
{
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    len += (pts[i] - pts[i - 1]).norm();
  }
  return len;
}

// Every history and future point of `track` within `tol` of `lane`.
bool follows(const AgentTrack & track, const std::vector<Vec2> & lane, double tol)
{
  for (const auto & h : track.history) {
    if (project(lane, h.position).distance > tol) {
      return false;
    }
  }
  for (const auto & p : *track.future) {
    if (project(lane, p).distance > tol) {
      return false;
    }
  }
  return true;
}
}  // namespace

TEST(Generator, SameSeedSameBytes)
{
  auto cfg = simpl::testing::small_corpus(21, 5);
  cfg.dropout_prob = 0.3;
  const auto a = scratch("simpl_synth_a");
  const auto b = scratch("simpl_synth_b");
  write_corpus(a.string(), cfg, generate(cfg));
  write_corpus(b.string(), cfg, generate(cfg));
  std::size_t files = 0;
  for (const auto & e : fs::directory_iterator(a)) {
    const auto other = b / e.path().filename();
    ASSERT_TRUE(fs::exists(other));
    EXPECT_EQ(simpl::testing::read_bytes(e.path().string()), simpl::testing::read_bytes(other.string()));
    ++files;
  }
  EXPECT_EQ(files, 6u);

  cfg.seed = 22;
  EXPECT_NE(scene_to_json(generate_scene(cfg, 0)), scene_to_json(generate(simpl::testing::small_corpus(21, 1))[0]));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Generator, CorpusRoundTrip)
{
  const auto cfg = simpl::testing::small_corpus(23, 4);
  const auto scenes = generate(cfg);
  const auto dir = scratch("simpl_synth_rt");
  write_corpus(dir.string(), cfg, scenes);
  const auto back = read_corpus(dir.string());
  ASSERT_EQ(back.size(), scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    EXPECT_EQ(scene_to_json(back[i]), scene_to_json(scenes[i]));
  }
  const auto manifest = read_json_file((dir / kManifestName).string());
  EXPECT_EQ(GeneratorConfig::from_json(manifest.at("generator")).to_json(), cfg.to_json());
  EXPECT_EQ(manifest.at("scenes").size(), scenes.size());
  EXPECT_EQ(scenes[3].scenario_id, "synth_000003");
  fs::remove_all(dir);
}

TEST(Generator, NoiseFreeHistoryLiesOnLane)
{
  auto cfg = simpl::testing::small_corpus(24, 20, 0.0);
  for (const auto & scene : generate(cfg)) {
    for (const auto & agent : scene.agents) {
      bool on_some_lane = false;
      for (const auto & lane : scene.map_elements) {
        on_some_lane = on_some_lane || follows(agent, lane.points, 1e-9);
      }
      EXPECT_TRUE(on_some_lane) << scene.scenario_id << "/" << agent.id;
    }
  }
}

TEST(Generator, StraightLaneEndpoint)
{
  auto cfg = simpl::testing::small_corpus(25, 10, 0.0);
  cfg.straight_fraction = 1.0;
  for (const auto & scene : generate(cfg)) {
    for (const auto & agent : scene.agents) {
      const auto & h = agent.history;
      const Vec2 obs = h.back().position;
      const Vec2 step = obs - h[h.size() - 2].position;
      const double speed = step.norm() / scene.dt;
      EXPECT_GE(speed, cfg.min_speed - 1e-9);
      EXPECT_LE(speed, cfg.max_speed + 1e-9);
      const Vec2 d = agent.future->back() - obs;
      const double ahead = speed * static_cast<double>(scene.future_len) * scene.dt;
      EXPECT_NEAR(d.norm(), ahead, 1e-9);
      EXPECT_NEAR(cross(d, step) / (d.norm() * step.norm()), 0.0, 1e-9);
      EXPECT_GT(dot(d, step), 0.0);
    }
  }
}

TEST(Generator, SceneInvariants)
{
  auto cfg = simpl::testing::small_corpus(26, 40);
  cfg.dropout_prob = 0.5;
  const double ahead = 2.0 * cfg.max_speed * static_cast<double>(cfg.horizon) * cfg.dt;
  std::size_t arcs = 0, lanes = 0, dropped = 0;
  for (const auto & scene : generate(cfg)) {
    EXPECT_NO_THROW(validate_scene(scene));
    EXPECT_GE(scene.map_elements.size(), cfg.min_lanes);
    EXPECT_LE(scene.map_elements.size(), cfg.max_lanes);
    EXPECT_GE(scene.agents.size(), cfg.min_agents);
    EXPECT_LE(scene.agents.size(), cfg.max_agents);
    auto inside = [](const Vec2 & p) { return std::abs(p.x) <= kRegionHalfSize && std::abs(p.y) <= kRegionHalfSize; };
    for (const auto & lane : scene.map_elements) {
      EXPECT_GE(polyline_length(lane.points), ahead);
      for (const auto & p : lane.points) {
        EXPECT_TRUE(inside(p));
      }
      const auto & pts = lane.points;
      const double turn = cross(pts[1] - pts[0], pts.back() - pts[pts.size() - 2]);
      arcs += std::abs(turn) > 1e-9 ? 1 : 0;
      ++lanes;
    }
    for (const auto & agent : scene.agents) {
      EXPECT_TRUE(agent.is_target);
      EXPECT_TRUE(agent.history.back().valid);
      dropped += agent.history.front().valid ? 0 : 1;
      for (const auto & p : *agent.future) {
        EXPECT_TRUE(inside(p));
      }
    }
  }
  const double arc_share = static_cast<double>(arcs) / static_cast<double>(lanes);
  EXPECT_GT(arc_share, 0.2);
  EXPECT_LT(arc_share, 0.6);
  EXPECT_GT(dropped, 0u);
}

TEST(Generator, HasDistractorLane)
{
  for (const auto & scene : generate(simpl::testing::small_corpus(27, 30, 0.0))) {
    std::size_t unused = 0;
    for (const auto & lane : scene.map_elements) {
      bool used = false;
      for (const auto & agent : scene.agents) {
        used = used || follows(agent, lane.points, 1e-9);
      }
      unused += used ? 0 : 1;
    }
    EXPECT_GE(unused, 1u) << scene.scenario_id;
  }
}

TEST(Generator, ConfigValidation)
{
  GeneratorConfig c;
  c.min_speed = 20.0;
  EXPECT_THROW(c.validate(), SimplException);
  GeneratorConfig d;
  d.max_speed = 50.0;
  EXPECT_THROW(d.validate(), SimplException);
  GeneratorConfig e;
  e.min_lanes = 1;
  EXPECT_THROW(e.validate(), SimplException);
  try {
    GeneratorConfig::from_json(Json{{"speed", "fast"}});
    FAIL();
  } catch (const SimplException & ex) {
    EXPECT_EQ(ex.kind(), SimplError_t::InvalidInput);
  }
}

TEST(Oracle, ExactWithoutNoise)
{
  for (const auto & scene : generate(simpl::testing::small_corpus(28, 20, 0.0))) {
    const auto pred = oracle_predictor(scene);
    const auto rows = metrics::evaluate_scene(pred, scene);
    ASSERT_EQ(rows.size(), scene.agents.size());
    for (const auto & r : rows) {
      EXPECT_NEAR(r.min_fde, 0.0, 1e-6);
      EXPECT_NEAR(r.min_ade, 0.0, 1e-6);
      EXPECT_EQ(r.brier_min_fde, r.min_fde);
    }
  }
}

TEST(Oracle, NoisyFloorIsSmall)
{
  std::vector<metrics::AgentMetrics> rows;
  for (const auto & scene : generate(simpl::testing::small_corpus(29, 40))) {
    const auto r = metrics::evaluate_scene(oracle_predictor(scene), scene);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const auto report = metrics::aggregate(rows, 1);
  EXPECT_GT(report.min_fde, 0.0);
  EXPECT_LT(report.min_fde, 1.0);
  EXPECT_EQ(report.brier_min_fde, report.min_fde);
  EXPECT_LT(report.min_ade, report.min_fde);
}
