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

#ifndef SIMPL__SYNTH__GENERATOR_HPP_
#define SIMPL__SYNTH__GENERATOR_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/common/geometry.hpp"
#include "simpl/scene/scene.hpp"
#include "simpl/scene/scene_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace simpl::synth
{
inline constexpr double kLaneWidth = 3.5;      // m
inline constexpr double kLaneLength = 110.0;   // m, arc length
inline constexpr double kLaneStart = -40.0;    // m, local x of every lane's first point
inline constexpr double kLaneSpacing = 1.0;    // m between centerline samples
inline constexpr double kRegionHalfSize = 100.0;

struct GeneratorConfig
{
  std::uint64_t seed{0};
  std::size_t num_scenes{16};
  std::size_t min_agents{2};
  std::size_t max_agents{4};
  std::size_t min_lanes{2};
  std::size_t max_lanes{3};
  double min_speed{5.0};   // m/s
  double max_speed{15.0};  // m/s
  double min_curvature{0.005};  // 1/m, magnitude of arc lanes
  double max_curvature{0.02};
  double straight_fraction{0.6};
  double noise_std{0.2};  // m, history only
  double dropout_prob{0.0};  // chance that an agent misses its first few history steps
  double observe_min{35.0};  // m, arc length at the observation step
  double observe_max{45.0};
  double max_translation{5.0};  // m
  std::size_t history{20};
  std::size_t horizon{30};
  double dt{0.1};
  std::string id_prefix{"synth"};

  void validate() const
  {
    expect(num_scenes >= 1, "num_scenes must be >= 1");
    expect(min_agents >= 1 && min_agents <= max_agents, "invalid agents range");
    expect(min_lanes >= 2 && min_lanes <= max_lanes, "lanes range must start at 2 or more");
    expect(min_speed > 0.0 && min_speed <= max_speed, "invalid speed range");
    expect(min_curvature > 0.0 && min_curvature <= max_curvature, "invalid curvature range");
    expect(straight_fraction >= 0.0 && straight_fraction <= 1.0, "straight_fraction must be in [0,1]");
    expect(noise_std >= 0.0, "noise_std must be >= 0");
    expect(dropout_prob >= 0.0 && dropout_prob <= 1.0, "dropout_prob must be in [0,1]");
    expect(history >= 2 && horizon >= 1 && dt > 0.0, "invalid history/horizon/dt");
    const double back = max_speed * static_cast<double>(history - 1) * dt;
    const double ahead = max_speed * static_cast<double>(horizon) * dt;
    expect(observe_min <= observe_max && observe_min >= back, "history would start before the lane");
    expect(observe_max + ahead <= kLaneLength, "future would run off the lane");
    expect(kLaneLength >= 2.0 * ahead, "lanes too short for the horizon");
    // Farthest local point: lane end reach plus the outermost lateral offset.
    const double reach = std::max(-kLaneStart, kLaneStart + kLaneLength) +
                         kLaneWidth * static_cast<double>(max_lanes) + max_translation;
    expect(reach <= kRegionHalfSize, "scene would leave the 200 m x 200 m region");
  }

  Json to_json() const
  {
    return {{"seed", seed},
            {"num_scenes", num_scenes},
            {"agents", {min_agents, max_agents}},
            {"lanes", {min_lanes, max_lanes}},
            {"speed", {min_speed, max_speed}},
            {"curvature", {min_curvature, max_curvature}},
            {"straight_fraction", straight_fraction},
            {"noise_std", noise_std},
            {"dropout_prob", dropout_prob},
            {"observe", {observe_min, observe_max}},
            {"max_translation", max_translation},
            {"history", history},
            {"horizon", horizon},
            {"dt", dt},
            {"id_prefix", id_prefix}};
  }

  static GeneratorConfig from_json(const Json & j)
  {
    GeneratorConfig c;
    try {
      c.seed = j.value("seed", c.seed);
      c.num_scenes = j.value("num_scenes", c.num_scenes);
      if (j.contains("agents")) {
        c.min_agents = j.at("agents").at(0).get<std::size_t>();
        c.max_agents = j.at("agents").at(1).get<std::size_t>();
      }
      if (j.contains("lanes")) {
        c.min_lanes = j.at("lanes").at(0).get<std::size_t>();
        c.max_lanes = j.at("lanes").at(1).get<std::size_t>();
      }
      if (j.contains("speed")) {
        c.min_speed = j.at("speed").at(0).get<double>();
        c.max_speed = j.at("speed").at(1).get<double>();
      }
      if (j.contains("curvature")) {
        c.min_curvature = j.at("curvature").at(0).get<double>();
        c.max_curvature = j.at("curvature").at(1).get<double>();
      }
      if (j.contains("observe")) {
        c.observe_min = j.at("observe").at(0).get<double>();
        c.observe_max = j.at("observe").at(1).get<double>();
      }
      c.straight_fraction = j.value("straight_fraction", c.straight_fraction);
      c.noise_std = j.value("noise_std", c.noise_std);
      c.dropout_prob = j.value("dropout_prob", c.dropout_prob);
      c.max_translation = j.value("max_translation", c.max_translation);
      c.history = j.value("history", c.history);
      c.horizon = j.value("horizon", c.horizon);
      c.dt = j.value("dt", c.dt);
      c.id_prefix = j.value("id_prefix", c.id_prefix);
    } catch (const nlohmann::json::exception & e) {
      throw SimplException(SimplError_t::InvalidInput, std::string("bad generator config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

/**
 * @brief SplitMix64 step, used to derive independent per-scene seeds.
 */
inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * @brief Constant-curvature lane in its scene-local frame, heading +x at arc length 0.
 */
struct LaneShape
{
  double offset{0.0};     // m, lateral position of the start point
  double curvature{0.0};  // 1/m, signed; zero means straight

  Vec2 at(double s) const
  {
    if (curvature == 0.0) {
      return {kLaneStart + s, offset};
    }
    const double k = curvature;
    return {kLaneStart + std::sin(k * s) / k, offset + (1.0 - std::cos(k * s)) / k};
  }
};

/**
 * @brief Closest point of a polyline to `p`, as arc length and distance.
 */
struct Projection
{
  double arc{0.0};
  double distance{std::numeric_limits<double>::infinity()};
};

inline Projection project(const std::vector<Vec2> & line, const Vec2 & p)
{
  Projection best;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec2 seg = line[i + 1] - line[i];
    const double len = seg.norm();
    const double u = std::clamp(dot(p - line[i], seg) / (len * len), 0.0, 1.0);
    const double d = (line[i] + seg * u - p).norm();
    if (d < best.distance) {
      best = {acc + u * len, d};
    }
    acc += len;
  }
  return best;
}

/**
 * @brief Point and unit tangent at arc length `s`; linear extrapolation past either end.
 */
inline std::pair<Vec2, Vec2> point_at(const std::vector<Vec2> & line, double s)
{
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const Vec2 seg = line[i + 1] - line[i];
    const double len = seg.norm();
    const bool last = i + 2 == line.size();
    if (s <= acc + len || last) {
      const Vec2 dir = seg / len;
      return {line[i] + dir * (s - acc), dir};
    }
    acc += len;
  }
  throw SimplException(SimplError_t::InvalidInput, "point_at: polyline needs 2 or more points");
}

namespace detail
{
inline std::string padded(std::size_t i, int width)
{
  std::string s = std::to_string(i);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}
}  // namespace detail

/**
 * @brief Generate scene `index` of the corpus described by `cfg`.
 */
inline Scene generate_scene(const GeneratorConfig & cfg, std::size_t index)
{
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(index)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::normal_distribution<double> noise(0.0, 1.0);

  Scene scene;
  scene.scenario_id = cfg.id_prefix + "_" + detail::padded(index, 6);
  scene.dt = cfg.dt;
  scene.history_len = cfg.history;
  scene.future_len = cfg.horizon;

  const RigidTransform2 tf{
    uniform(-std::numbers::pi, std::numbers::pi),
    {uniform(-cfg.max_translation, cfg.max_translation), uniform(-cfg.max_translation, cfg.max_translation)}};

  const std::size_t num_lanes = pick(cfg.min_lanes, cfg.max_lanes);
  std::vector<LaneShape> lanes(num_lanes);
  for (std::size_t l = 0; l < num_lanes; ++l) {
    lanes[l].offset = (static_cast<double>(l) - 0.5 * static_cast<double>(num_lanes - 1)) * kLaneWidth;
    if (unit(rng) >= cfg.straight_fraction) {
      const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
      lanes[l].curvature = sign * uniform(cfg.min_curvature, cfg.max_curvature);
    }
  }
  // Agents move along the sampled centerline itself, so a noise-free history lies on it exactly.
  const std::size_t samples = static_cast<std::size_t>(std::round(kLaneLength / kLaneSpacing)) + 1;
  std::vector<std::vector<Vec2>> local(num_lanes);
  for (std::size_t l = 0; l < num_lanes; ++l) {
    MapPolyline poly{"lane" + std::to_string(l), MapKind::LaneCenterline, {}};
    for (std::size_t i = 0; i < samples; ++i) {
      local[l].push_back(lanes[l].at(static_cast<double>(i) * kLaneSpacing));
      poly.points.push_back(tf.apply(local[l].back()));
    }
    scene.map_elements.push_back(std::move(poly));
  }

  // One lane is never followed.
  const std::size_t distractor = pick(0, num_lanes - 1);
  const std::size_t num_agents = pick(cfg.min_agents, cfg.max_agents);
  for (std::size_t a = 0; a < num_agents; ++a) {
    std::size_t lane = pick(0, num_lanes - 2);
    if (lane >= distractor) {
      ++lane;
    }
    const double speed = uniform(cfg.min_speed, cfg.max_speed);
    const double s_obs = uniform(cfg.observe_min, cfg.observe_max);
    const std::size_t dropped = unit(rng) < cfg.dropout_prob ? pick(1, std::min<std::size_t>(5, cfg.history - 2)) : 0;

    AgentTrack track;
    track.id = "agent" + std::to_string(a);
    track.kind = AgentKind::Vehicle;
    track.is_target = true;
    for (std::size_t h = 0; h < cfg.history; ++h) {
      const double back = static_cast<double>(cfg.history - 1 - h) * cfg.dt * speed;
      Vec2 p = point_at(local[lane], s_obs - back).first;
      p = p + Vec2{cfg.noise_std * noise(rng), cfg.noise_std * noise(rng)};
      track.history.push_back({tf.apply(p), h >= dropped});
    }
    std::vector<Vec2> future;
    for (std::size_t s = 1; s <= cfg.horizon; ++s) {
      future.push_back(tf.apply(point_at(local[lane], s_obs + static_cast<double>(s) * cfg.dt * speed).first));
    }
    track.future = std::move(future);
    scene.agents.push_back(std::move(track));
  }
  validate_scene(scene);
  return scene;
}

inline std::vector<Scene> generate(const GeneratorConfig & cfg)
{
  cfg.validate();
  std::vector<Scene> scenes;
  scenes.reserve(cfg.num_scenes);
  for (std::size_t i = 0; i < cfg.num_scenes; ++i) {
    scenes.push_back(generate_scene(cfg, i));
  }
  return scenes;
}

inline constexpr const char * kManifestName = "manifest.json";

/**
 * @brief Write one file per scene plus a manifest listing ids and the generator config.
 */
inline void write_corpus(const std::string & dir, const GeneratorConfig & cfg, const std::vector<Scene> & scenes)
{
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw SimplException(SimplError_t::IoError, "cannot create directory " + dir + ": " + ec.message());
  }
  Json ids = Json::array();
  for (const auto & s : scenes) {
    write_scene((fs::path(dir) / (s.scenario_id + ".json")).string(), s);
    ids.push_back(s.scenario_id);
  }
  const Json manifest = {{"generator", cfg.to_json()}, {"scenes", ids}};
  write_text_file((fs::path(dir) / kManifestName).string(), manifest.dump(2) + "\n");
}

/**
 * @brief Scenes of a directory: manifest order if present, otherwise sorted file names.
 */
inline std::vector<Scene> read_corpus(const std::string & dir)
{
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw SimplException(SimplError_t::IoError, "not a directory: " + dir);
  }
  std::vector<std::string> files;
  const fs::path manifest = fs::path(dir) / kManifestName;
  if (fs::exists(manifest)) {
    const auto j = read_json_file(manifest.string());
    try {
      for (const auto & id : j.at("scenes")) {
        files.push_back((fs::path(dir) / (id.get<std::string>() + ".json")).string());
      }
    } catch (const nlohmann::json::exception & e) {
      throw SimplException(SimplError_t::IoError, "corrupt manifest " + manifest.string() + ": " + e.what());
    }
  } else {
    for (const auto & e : fs::directory_iterator(dir)) {
      if (e.path().extension() == ".json") {
        files.push_back(e.path().string());
      }
    }
    std::sort(files.begin(), files.end());
  }
  expect(!files.empty(), "no scenes found in " + dir);
  std::vector<Scene> scenes;
  for (const auto & f : files) {
    scenes.push_back(read_scene(f));
  }
  return scenes;
}
}  // namespace simpl::synth
#endif  // SIMPL__SYNTH__GENERATOR_HPP_
