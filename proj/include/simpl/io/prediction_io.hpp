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

#ifndef SIMPL__IO__PREDICTION_IO_HPP_
#define SIMPL__IO__PREDICTION_IO_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/model/prediction.hpp"
#include "simpl/scene/scene_io.hpp"

#include <string>
#include <vector>

namespace simpl
{
namespace detail
{
inline Json points_to_json(const std::vector<Vec2> & pts)
{
  Json arr = Json::array();
  for (const auto & p : pts) {
    arr.push_back({p.x, p.y});
  }
  return arr;
}

inline std::vector<Vec2> points_from_json(const Json & j)
{
  std::vector<Vec2> pts;
  for (const auto & p : j) {
    expect(p.is_array() && p.size() == 2, "expected [x, y] pairs");
    pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  return pts;
}
}  // namespace detail

inline Json prediction_to_json(const PredictionSet & set)
{
  Json agents = Json::array();
  for (const auto & a : set.agents) {
    Json modes = Json::array();
    for (const auto & m : a.modes) {
      modes.push_back(
        {{"score", m.score},
         {"control_points", detail::points_to_json(m.control_points)},
         {"positions", detail::points_to_json(m.positions)},
         {"velocities", detail::points_to_json(m.velocities)},
         {"yaws", detail::points_to_json(m.yaws)}});
    }
    agents.push_back(
      {{"id", a.agent_id},
       {"anchor", {{"position", {a.anchor.position.x, a.anchor.position.y}},
                   {"heading", {a.anchor.heading.x, a.anchor.heading.y}}}},
       {"modes", modes}});
  }
  return {{"scenario_id", set.scenario_id}, {"agents", agents}};
}

inline PredictionSet prediction_from_json(const Json & j)
{
  PredictionSet set;
  try {
    set.scenario_id = j.at("scenario_id").get<std::string>();
    for (const auto & ja : j.at("agents")) {
      AgentPrediction a;
      a.agent_id = ja.at("id").get<std::string>();
      if (ja.contains("anchor")) {
        const auto & an = ja.at("anchor");
        a.anchor.position = {an.at("position").at(0).get<double>(), an.at("position").at(1).get<double>()};
        a.anchor.heading = {an.at("heading").at(0).get<double>(), an.at("heading").at(1).get<double>()};
      }
      for (const auto & jm : ja.at("modes")) {
        ModeOutput m;
        m.score = jm.at("score").get<double>();
        m.control_points = detail::points_from_json(jm.value("control_points", Json::array()));
        m.positions = detail::points_from_json(jm.at("positions"));
        m.velocities = detail::points_from_json(jm.value("velocities", Json::array()));
        m.yaws = detail::points_from_json(jm.at("yaws"));
        expect(m.yaws.size() == m.positions.size(), "agent '" + a.agent_id + "': yaws/positions length mismatch");
        a.modes.push_back(std::move(m));
      }
      expect(!a.modes.empty(), "agent '" + a.agent_id + "' has no modes");
      set.agents.push_back(std::move(a));
    }
  } catch (const nlohmann::json::exception & e) {
    throw SimplException(SimplError_t::InvalidInput, std::string("malformed prediction file: ") + e.what());
  }
  return set;
}

inline PredictionSet read_prediction(const std::string & path)
{
  return prediction_from_json(read_json_file(path));
}

inline void write_prediction(const std::string & path, const PredictionSet & set)
{
  write_text_file(path, prediction_to_json(set).dump() + "\n");
}
}  // namespace simpl
#endif  // SIMPL__IO__PREDICTION_IO_HPP_
