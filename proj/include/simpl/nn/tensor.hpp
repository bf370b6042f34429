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

#ifndef SIMPL__NN__TENSOR_HPP_
#define SIMPL__NN__TENSOR_HPP_

#include "simpl/common/exception.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace simpl::nn
{
using Shape = std::vector<std::size_t>;

inline std::size_t numel(const Shape & shape) noexcept
{
  return std::accumulate(
    shape.begin(), shape.end(), std::size_t{1}, std::multiplies<std::size_t>{});
}

inline std::string shape_str(const Shape & shape)
{
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    out += (i ? "," : "") + std::to_string(shape[i]);
  }
  return out + "]";
}

/**
 * @brief Dense row-major tensor.
 */
template <typename T>
class Tensor
{
public:
  using value_type = T;

  Tensor() = default;

  explicit Tensor(Shape shape, T fill = T(0)) : shape_(std::move(shape)), data_(numel(shape_), fill)
  {
  }

  Tensor(Shape shape, std::vector<T> values) : shape_(std::move(shape)), data_(std::move(values))
  {
    expect(
      data_.size() == numel(shape_),
      "tensor value count " + std::to_string(data_.size()) + " does not match shape " +
        shape_str(shape_));
  }

  const Shape & shape() const noexcept { return shape_; }
  std::size_t ndim() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T * data() noexcept { return data_.data(); }
  const T * data() const noexcept { return data_.data(); }
  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  std::vector<T> & storage() noexcept { return data_; }
  const std::vector<T> & storage() const noexcept { return data_; }

  T & operator[](std::size_t i) noexcept { return data_[i]; }
  const T & operator[](std::size_t i) const noexcept { return data_[i]; }

  T & operator()(std::size_t i, std::size_t j) noexcept { return data_[i * shape_[1] + j]; }
  const T & operator()(std::size_t i, std::size_t j) const noexcept
  {
    return data_[i * shape_[1] + j];
  }
  T & operator()(std::size_t i, std::size_t j, std::size_t k) noexcept
  {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  const T & operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept
  {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  /**
   * @brief Change the shape in place; the element count must stay the same.
   */
  void reshape(Shape shape)
  {
    expect(
      numel(shape) == data_.size(),
      "cannot reshape " + shape_str(shape_) + " to " + shape_str(shape));
    shape_ = std::move(shape);
  }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  bool all_finite() const noexcept
  {
    return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
  }

  template <typename U>
  Tensor<U> cast() const
  {
    return Tensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
  }

  bool operator==(const Tensor & other) const = default;

private:
  Shape shape_;
  std::vector<T> data_;
};
}  // namespace simpl::nn
#endif  // SIMPL__NN__TENSOR_HPP_
