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

#ifndef SIMPL__STUDY__COEFFICIENTS_HPP_
#define SIMPL__STUDY__COEFFICIENTS_HPP_

#include "simpl/bezier/fit.hpp"
#include "simpl/scene/anchor.hpp"
#include "simpl/scene/scene.hpp"
#include "simpl/study/bench.hpp"

#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace simpl::study
{
struct CoefficientRow
{
  std::string basis;  //!< "monomial" or "bernstein"
  int order{0};
  double value{0.0};  //!< x coefficient in the agent's local frame
};

/**
 * @brief Fit every ground-truth future (agent frame, t_s = s / T) with both bases and collect
 * the x coefficients.
 */
inline std::vector<CoefficientRow> coefficient_study(const std::vector<Scene> & scenes, int degree)
{
  std::vector<CoefficientRow> rows;
  for (const auto & scene : scenes) {
    const double tau_max = static_cast<double>(scene.future_len) * scene.dt;
    std::vector<double> taus;
    for (std::size_t s = 1; s <= scene.future_len; ++s) {
      taus.push_back(static_cast<double>(s) * scene.dt);
    }
    for (const auto & agent : scene.agents) {
      if (!agent.future || agent.future->size() != scene.future_len) {
        continue;
      }
      const auto anchor = build_anchor_pose_agent(agent);
      std::vector<Vec2> local;
      for (const auto & p : *agent.future) {
        local.push_back(anchor.to_local(p));
      }
      const auto mono = bezier::fit_monomial(local, taus, degree, tau_max);
      const auto bez = bezier::fit_bezier(local, taus, degree, tau_max);
      for (int i = 0; i <= degree; ++i) {
        rows.push_back({"monomial", i, mono.coefficients[static_cast<std::size_t>(i)].x});
      }
      for (int i = 0; i <= degree; ++i) {
        rows.push_back({"bernstein", i, bez.control_points[static_cast<std::size_t>(i)].x});
      }
    }
  }
  return rows;
}

/**
 * @brief p95 - p5 of the values per (basis, order).
 */
inline std::map<std::pair<std::string, int>, double> coefficient_spans(const std::vector<CoefficientRow> & rows)
{
  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  for (const auto & r : rows) {
    groups[{r.basis, r.order}].push_back(r.value);
  }
  std::map<std::pair<std::string, int>, double> spans;
  for (const auto & [key, values] : groups) {
    spans[key] = percentile(values, 95.0) - percentile(values, 5.0);
  }
  return spans;
}

inline std::string coefficient_csv(const std::vector<CoefficientRow> & rows)
{
  std::ostringstream os;
  os << "basis,order,value\n" << std::setprecision(17);
  for (const auto & r : rows) {
    os << r.basis << ',' << r.order << ',' << r.value << '\n';
  }
  return os.str();
}
}  // namespace simpl::study
#endif  // SIMPL__STUDY__COEFFICIENTS_HPP_
