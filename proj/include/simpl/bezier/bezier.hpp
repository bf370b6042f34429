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

#ifndef SIMPL__BEZIER__BEZIER_HPP_
#define SIMPL__BEZIER__BEZIER_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/common/geometry.hpp"
#include "simpl/nn/tensor.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace simpl::bezier
{
inline constexpr double kMinYawSpeed = 0.1;  // m/s

/**
 * @brief Binomial coefficient by multiplicative recurrence; exact in double for small n.
 */
inline double binomial(int n, int k)
{
  if (k < 0 || k > n) {
    return 0.0;
  }
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return c;
}

/**
 * @brief Bernstein weights C(n, i) t^i (1 - t)^(n - i) for i = 0..n.
 */
inline std::vector<double> bernstein_basis(int n, double t)
{
  expect(n >= 0, "bernstein_basis: degree must be non-negative");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw SimplException(
      SimplError_t::InvalidInput, "bernstein_basis: t=" + std::to_string(t) + " outside [0, 1]");
  }
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    w[static_cast<std::size_t>(i)] = binomial(n, i) * std::pow(t, i) * std::pow(1.0 - t, n - i);
  }
  return w;
}

/**
 * @brief Normalized sample times t_s = s / T for s = 1..T (future steps only).
 */
inline std::vector<double> normalized_times(std::size_t horizon)
{
  std::vector<double> t(horizon);
  for (std::size_t s = 1; s <= horizon; ++s) {
    t[s - 1] = static_cast<double>(s) / static_cast<double>(horizon);
  }
  return t;
}

/**
 * @brief B [T, n + 1] with B(s, i) = b_n^i(t_s).
 */
inline nn::Tensor<double> basis_matrix(int n, std::span<const double> times)
{
  nn::Tensor<double> b({times.size(), static_cast<std::size_t>(n) + 1});
  for (std::size_t s = 0; s < times.size(); ++s) {
    const auto w = bernstein_basis(n, times[s]);
    for (std::size_t i = 0; i < w.size(); ++i) {
      b(s, i) = w[i];
    }
  }
  return b;
}

/**
 * @brief V [T, n + 1] such that V x P gives d/dtau of the curve with control points P:
 * (n / tau_max) * B_{n-1} x D where D maps P to forward differences.
 */
inline nn::Tensor<double> velocity_matrix(int n, std::span<const double> times, double tau_max)
{
  expect(n >= 1, "velocity_matrix: degree must be >= 1");
  expect(tau_max > 0.0, "velocity_matrix: tau_max must be positive");
  const auto low = basis_matrix(n - 1, times);
  const std::size_t cols = static_cast<std::size_t>(n) + 1;
  nn::Tensor<double> v({times.size(), cols});
  const double f = static_cast<double>(n) / tau_max;
  for (std::size_t s = 0; s < times.size(); ++s) {
    for (std::size_t i = 0; i + 1 < cols; ++i) {
      v(s, i) -= f * low(s, i);
      v(s, i + 1) += f * low(s, i);
    }
  }
  return v;
}

/**
 * @brief Degree-n curve over actual time tau in [0, tau_max].
 */
struct BezierCurve
{
  int degree{0};
  std::vector<Vec2> control_points;
  double tau_max{1.0};

  Vec2 at_time(double tau) const
  {
    if (!(tau >= 0.0 && tau <= tau_max)) {
      throw SimplException(
        SimplError_t::InvalidInput,
        "timestamp " + std::to_string(tau) + " outside [0, " + std::to_string(tau_max) + "]");
    }
    return at_normalized(tau / tau_max);
  }

  Vec2 at_normalized(double t) const
  {
    const auto w = bernstein_basis(degree, t);
    Vec2 p{};
    for (std::size_t i = 0; i < w.size(); ++i) {
      p = p + control_points[i] * w[i];
    }
    return p;
  }
};

inline BezierCurve make_curve(std::vector<Vec2> control_points, double tau_max)
{
  expect(control_points.size() >= 2, "Bezier curve needs degree >= 1");
  expect(tau_max > 0.0, "Bezier curve needs tau_max > 0");
  const int n = static_cast<int>(control_points.size()) - 1;
  return {n, std::move(control_points), tau_max};
}

/**
 * @brief Positions at the given timestamps via the basis-matrix product, per axis.
 */
inline std::vector<Vec2> evaluate_positions(const BezierCurve & curve, std::span<const double> taus)
{
  std::vector<double> t(taus.size());
  for (std::size_t s = 0; s < taus.size(); ++s) {
    if (!(taus[s] >= 0.0 && taus[s] <= curve.tau_max)) {
      throw SimplException(
        SimplError_t::InvalidInput, "timestamp " + std::to_string(taus[s]) + " out of range");
    }
    t[s] = taus[s] / curve.tau_max;
  }
  const auto b = basis_matrix(curve.degree, t);
  std::vector<Vec2> out(taus.size());
  for (std::size_t s = 0; s < taus.size(); ++s) {
    for (std::size_t i = 0; i < curve.control_points.size(); ++i) {
      out[s] = out[s] + curve.control_points[i] * b(s, i);
    }
  }
  return out;
}

/**
 * @brief k-th time derivative by repeated hodograph: p'_i = n (p_{i+1} - p_i) / tau_max.
 */
inline BezierCurve derivative_curve(const BezierCurve & curve, int order)
{
  if (order < 0 || order > curve.degree) {
    throw SimplException(
      SimplError_t::InvalidInput, "derivative order " + std::to_string(order) +
                                    " exceeds degree " + std::to_string(curve.degree));
  }
  BezierCurve out = curve;
  for (int k = 0; k < order; ++k) {
    const int n = out.degree;
    std::vector<Vec2> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      pts[u] = (out.control_points[u + 1] - out.control_points[u]) * (n / out.tau_max);
    }
    out.control_points = std::move(pts);
    out.degree = n - 1;
  }
  return out;
}

/**
 * @brief Unit heading per step along the velocity. Below `min_speed` the previous heading is
 * kept; the first step falls back to `anchor_heading`.
 */
inline std::vector<Vec2> yaw_from_velocity(
  std::span<const Vec2> velocities, const Vec2 & anchor_heading, double min_speed = kMinYawSpeed)
{
  std::vector<Vec2> out(velocities.size());
  Vec2 prev = anchor_heading;
  for (std::size_t s = 0; s < velocities.size(); ++s) {
    const double speed = velocities[s].norm();
    if (speed >= min_speed) {
      prev = velocities[s] / speed;
    }
    out[s] = prev;
  }
  return out;
}
}  // namespace simpl::bezier
#endif  // SIMPL__BEZIER__BEZIER_HPP_
