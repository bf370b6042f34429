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

#ifndef SIMPL__COMMON__GEOMETRY_HPP_
#define SIMPL__COMMON__GEOMETRY_HPP_

#include <cmath>

namespace simpl
{
/**
 * @brief 2-D vector in meters (positions) or unitless (headings).
 */
struct Vec2
{
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(const Vec2 & o) const noexcept { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 & o) const noexcept { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const noexcept { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const noexcept { return {x / s, y / s}; }
  constexpr bool operator==(const Vec2 &) const noexcept = default;

  double norm() const noexcept { return std::hypot(x, y); }
};

constexpr double dot(const Vec2 & a, const Vec2 & b) noexcept { return a.x * b.x + a.y * b.y; }

// z-component of the 3-D cross product.
constexpr double cross(const Vec2 & a, const Vec2 & b) noexcept { return a.x * b.y - a.y * b.x; }

/**
 * @brief Rigid 2-D transform `p -> R(theta) * p + t`.
 */
struct RigidTransform2
{
  double theta{0.0};
  Vec2 translation{};

  Vec2 apply(const Vec2 & p) const noexcept { return rotate(p) + translation; }

  Vec2 rotate(const Vec2 & v) const noexcept
  {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
  }
};
}  // namespace simpl
#endif  // SIMPL__COMMON__GEOMETRY_HPP_
