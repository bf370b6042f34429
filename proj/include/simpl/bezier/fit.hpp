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

#ifndef SIMPL__BEZIER__FIT_HPP_
#define SIMPL__BEZIER__FIT_HPP_

#include "simpl/bezier/bezier.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

namespace simpl::bezier
{
/**
 * @brief Coefficients c_0..c_n of x(t) = sum_i c_i t^i over normalized time, per axis.
 */
struct MonomialFit
{
  std::vector<Vec2> coefficients;
};

namespace detail
{
inline std::vector<Vec2> solve_least_squares(
  const Eigen::MatrixXd & A, std::span<const Vec2> points, const char * what)
{
  const Eigen::Index rows = A.rows();
  Eigen::MatrixXd rhs(rows, 2);
  for (Eigen::Index r = 0; r < rows; ++r) {
    rhs(r, 0) = points[static_cast<std::size_t>(r)].x;
    rhs(r, 1) = points[static_cast<std::size_t>(r)].y;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < A.cols()) {
    throw SimplException(SimplError_t::NumericFailure, std::string(what) + ": rank-deficient system");
  }
  const Eigen::MatrixXd sol = qr.solve(rhs);
  std::vector<Vec2> out(static_cast<std::size_t>(A.cols()));
  for (Eigen::Index i = 0; i < A.cols(); ++i) {
    out[static_cast<std::size_t>(i)] = {sol(i, 0), sol(i, 1)};
  }
  return out;
}

inline std::vector<double> normalize_times(std::span<const double> taus, double tau_max)
{
  expect(tau_max > 0.0, "fit: tau_max must be positive");
  std::vector<double> t(taus.size());
  for (std::size_t s = 0; s < taus.size(); ++s) {
    expect(taus[s] >= 0.0 && taus[s] <= tau_max, "fit: timestamp out of range");
    t[s] = taus[s] / tau_max;
  }
  return t;
}
}  // namespace detail

/**
 * @brief Least-squares Bezier control points for samples `points` at times `taus`.
 */
inline BezierCurve fit_bezier(
  std::span<const Vec2> points, std::span<const double> taus, int degree, double tau_max)
{
  expect(degree >= 1, "fit_bezier: degree must be >= 1");
  expect(points.size() == taus.size(), "fit_bezier: points/timestamps size mismatch");
  expect(points.size() >= static_cast<std::size_t>(degree) + 1, "fit_bezier: need T >= n + 1");
  const auto t = detail::normalize_times(taus, tau_max);
  const auto b = basis_matrix(degree, t);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(t.size()), degree + 1);
  for (std::size_t s = 0; s < t.size(); ++s) {
    for (int i = 0; i <= degree; ++i) {
      A(static_cast<Eigen::Index>(s), i) = b(s, static_cast<std::size_t>(i));
    }
  }
  return {degree, detail::solve_least_squares(A, points, "fit_bezier"), tau_max};
}

inline MonomialFit fit_monomial(
  std::span<const Vec2> points, std::span<const double> taus, int degree, double tau_max)
{
  expect(degree >= 1, "fit_monomial: degree must be >= 1");
  expect(points.size() == taus.size(), "fit_monomial: points/timestamps size mismatch");
  expect(points.size() >= static_cast<std::size_t>(degree) + 1, "fit_monomial: need T >= n + 1");
  const auto t = detail::normalize_times(taus, tau_max);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(t.size()), degree + 1);
  for (std::size_t s = 0; s < t.size(); ++s) {
    double p = 1.0;
    for (int i = 0; i <= degree; ++i) {
      A(static_cast<Eigen::Index>(s), i) = p;
      p *= t[s];
    }
  }
  return {detail::solve_least_squares(A, points, "fit_monomial")};
}

inline Vec2 evaluate_monomial(const MonomialFit & fit, double t)
{
  Vec2 out{};
  double p = 1.0;
  for (const auto & c : fit.coefficients) {
    out = out + c * p;
    p *= t;
  }
  return out;
}
}  // namespace simpl::bezier
#endif  // SIMPL__BEZIER__FIT_HPP_
