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

#ifndef SIMPL__SCENE__SCENE_IO_HPP_
#define SIMPL__SCENE__SCENE_IO_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/scene/scene.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace simpl
{
using Json = nlohmann::json;

inline const char * to_string(AgentKind kind)
{
  switch (kind) {
    case AgentKind::Vehicle:
      return "vehicle";
    case AgentKind::Pedestrian:
      return "pedestrian";
    case AgentKind::Cyclist:
      return "cyclist";
    case AgentKind::Other:
      return "other";
  }
  return "other";
}

inline const char * to_string(MapKind kind)
{
  return kind == MapKind::LaneCenterline ? "lane_centerline" : "boundary";
}

inline AgentKind agent_kind_from_string(const std::string & s)
{
  if (s == "vehicle") return AgentKind::Vehicle;
  if (s == "pedestrian") return AgentKind::Pedestrian;
  if (s == "cyclist") return AgentKind::Cyclist;
  if (s == "other") return AgentKind::Other;
  throw SimplException(SimplError_t::InvalidInput, "unknown agent kind: " + s);
}

inline MapKind map_kind_from_string(const std::string & s)
{
  if (s == "lane_centerline") return MapKind::LaneCenterline;
  if (s == "boundary") return MapKind::Boundary;
  throw SimplException(SimplError_t::InvalidInput, "unknown map element kind: " + s);
}

inline Json scene_to_json(const Scene & scene)
{
  Json agents = Json::array();
  for (const auto & a : scene.agents) {
    Json hist = Json::array();
    for (const auto & h : a.history) {
      hist.push_back({h.position.x, h.position.y, h.valid ? 1 : 0});
    }
    Json rec = {{"id", a.id}, {"kind", to_string(a.kind)}, {"is_target", a.is_target}, {"history", hist}};
    if (a.future) {
      Json fut = Json::array();
      for (const auto & p : *a.future) {
        fut.push_back({p.x, p.y});
      }
      rec["future"] = fut;
    }
    agents.push_back(std::move(rec));
  }
  Json map = Json::array();
  for (const auto & m : scene.map_elements) {
    Json pts = Json::array();
    for (const auto & p : m.points) {
      pts.push_back({p.x, p.y});
    }
    map.push_back({{"id", m.id}, {"kind", to_string(m.kind)}, {"points", pts}});
  }
  return {
    {"scenario_id", scene.scenario_id},
    {"dt", scene.dt},
    {"history_len", scene.history_len},
    {"future_len", scene.future_len},
    {"agents", agents},
    {"map", map}};
}

/**
 * @brief Parse and validate a scene object. Structural problems raise `InvalidInput`.
 */
inline Scene scene_from_json(const Json & j)
{
  Scene scene;
  try {
    scene.scenario_id = j.at("scenario_id").get<std::string>();
    scene.dt = j.at("dt").get<double>();
    scene.history_len = j.at("history_len").get<std::size_t>();
    scene.future_len = j.at("future_len").get<std::size_t>();
    for (const auto & ja : j.at("agents")) {
      AgentTrack a;
      a.id = ja.at("id").get<std::string>();
      a.kind = agent_kind_from_string(ja.at("kind").get<std::string>());
      a.is_target = ja.value("is_target", false);
      for (const auto & h : ja.at("history")) {
        expect(h.size() == 3, "history entries must be [x, y, valid]");
        a.history.push_back({{h[0].get<double>(), h[1].get<double>()}, h[2].get<double>() != 0.0});
      }
      if (ja.contains("future") && !ja["future"].is_null()) {
        std::vector<Vec2> fut;
        for (const auto & p : ja["future"]) {
          expect(p.size() == 2, "future entries must be [x, y]");
          fut.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        a.future = std::move(fut);
      }
      scene.agents.push_back(std::move(a));
    }
    for (const auto & jm : j.at("map")) {
      MapPolyline m;
      m.id = jm.at("id").get<std::string>();
      m.kind = map_kind_from_string(jm.at("kind").get<std::string>());
      for (const auto & p : jm.at("points")) {
        expect(p.size() == 2, "map points must be [x, y]");
        m.points.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      scene.map_elements.push_back(std::move(m));
    }
  } catch (const Json::exception & e) {
    throw SimplException(SimplError_t::InvalidInput, std::string("malformed scene: ") + e.what());
  }
  validate_scene(scene);
  return scene;
}

inline Json read_json_file(const std::string & path)
{
  std::ifstream is(path);
  if (!is) {
    throw SimplException(SimplError_t::IoError, "cannot open file: " + path);
  }
  try {
    return Json::parse(is);
  } catch (const Json::parse_error & e) {
    throw SimplException(SimplError_t::IoError, "corrupt JSON in " + path + ": " + e.what());
  }
}

inline void write_text_file(const std::string & path, const std::string & text)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw SimplException(SimplError_t::IoError, "cannot open file for writing: " + path);
  }
  os << text;
  if (!os) {
    throw SimplException(SimplError_t::IoError, "failed writing " + path);
  }
}

inline Scene read_scene(const std::string & path) { return scene_from_json(read_json_file(path)); }

inline void write_scene(const std::string & path, const Scene & scene)
{
  write_text_file(path, scene_to_json(scene).dump() + "\n");
}
}  // namespace simpl
#endif  // SIMPL__SCENE__SCENE_IO_HPP_
