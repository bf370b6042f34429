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

#ifndef SIMPL__SCENE__REL_POSE_HPP_
#define SIMPL__SCENE__REL_POSE_HPP_

#include "simpl/nn/tensor.hpp"
#include "simpl/scene/anchor.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace simpl
{
using RelPose = std::array<double, 5>;

inline constexpr double kDegenerateDistance = 1e-9;  // m

/**
 * @brief r_{a->b} = [sin(alpha), cos(alpha), sin(beta), cos(beta), |d|].
 *
 * alpha is the heading difference from a to b; beta is the angle between d = p_a - p_b and
 * the heading of b. Headings are unit vectors, so the normalizing denominators drop out. When
 * |d| < 1e-9 the azimuth is undefined and (sin, cos) = (0, 1) is used. Identical headings give
 * exactly (0, 1) for alpha, so self-loops are exact.
 */
inline RelPose compute_rel_pose(const AnchorPose & a, const AnchorPose & b)
{
  const Vec2 d = a.position - b.position;
  const double dist = d.norm();
  RelPose r{cross(a.heading, b.heading), dot(a.heading, b.heading), 0.0, 1.0, dist};
  if (a.heading == b.heading) {
    r[0] = 0.0;
    r[1] = 1.0;
  }
  if (dist >= kDegenerateDistance) {
    r[2] = cross(d, b.heading) / dist;
    r[3] = dot(d, b.heading) / dist;
  }
  return r;
}

/**
 * @brief All-to-all relative poses as [N, N, 5]; r_{i->j} is stored at row j, column i.
 */
inline nn::Tensor<double> compute_rel_pose_tensor(const std::vector<AnchorPose> & anchors)
{
  const std::size_t n = anchors.size();
  expect(n >= 1, "relative pose tensor needs at least one anchor");
  nn::Tensor<double> out({n, n, 5});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const RelPose r = compute_rel_pose(anchors[i], anchors[j]);
      for (std::size_t k = 0; k < 5; ++k) {
        out(j, i, k) = r[k];
      }
    }
  }
  return out;
}
}  // namespace simpl
#endif  // SIMPL__SCENE__REL_POSE_HPP_
