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

#ifndef SIMPL__SCENE__GROUND_TRUTH_HPP_
#define SIMPL__SCENE__GROUND_TRUTH_HPP_

#include "simpl/bezier/bezier.hpp"
#include "simpl/common/geometry.hpp"

#include <vector>

namespace simpl
{
/**
 * @brief Ground-truth headings from future positions.
 *
 * Velocity at step s is the forward difference (g[s + 1] - g[s]) / dt; the last step reuses
 * the final backward difference. Headings then follow the same low-speed rule as predictions.
 */
inline std::vector<Vec2> future_yaws(const std::vector<Vec2> & future, double dt, const Vec2 & fallback)
{
  const std::size_t steps = future.size();
  std::vector<Vec2> vel(steps);
  for (std::size_t s = 0; s + 1 < steps; ++s) {
    vel[s] = (future[s + 1] - future[s]) / dt;
  }
  if (steps >= 2) {
    vel[steps - 1] = vel[steps - 2];
  }
  return bezier::yaw_from_velocity(vel, fallback);
}
}  // namespace simpl
#endif  // SIMPL__SCENE__GROUND_TRUTH_HPP_
