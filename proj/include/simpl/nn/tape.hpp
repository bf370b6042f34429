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

#ifndef SIMPL__NN__TAPE_HPP_
#define SIMPL__NN__TAPE_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/nn/tensor.hpp"

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace simpl::nn
{
/**
 * @brief Named trainable tensor with its gradient accumulator.
 */
template <typename T>
struct Parameter
{
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
};

template <typename T>
class Tape;

/**
 * @brief Handle to a node recorded on a `Tape`.
 */
template <typename T>
class Var
{
public:
  Var() = default;
  Var(Tape<T> * tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape<T> * tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

  const Tensor<T> & value() const { return tape_->value(id_); }
  const Shape & shape() const { return value().shape(); }

private:
  Tape<T> * tape_{nullptr};
  std::size_t id_{0};
};

/**
 * @brief Reverse-mode recording of a forward computation.
 *
 * Every op appends a node holding its output value and, when recording, a closure that
 * propagates the node's output gradient into its parents. Nodes are topologically ordered by
 * construction, so `backward` walks them in reverse insertion order.
 */
template <typename T>
class Tape
{
public:
  using BackwardFn = std::function<void(Tape &, const Tensor<T> &)>;

  explicit Tape(bool record = true) : record_(record) {}

  Tape(const Tape &) = delete;
  Tape & operator=(const Tape &) = delete;

  bool recording() const noexcept { return record_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  Var<T> constant(Tensor<T> value)
  {
    nodes_.push_back(Node{std::move(value), {}, false, {}, nullptr});
    return {this, nodes_.size() - 1};
  }

  /**
   * @brief Leaf node for a trainable parameter. Repeated calls with the same parameter return
   * the same node.
   */
  Var<T> parameter(Parameter<T> & p)
  {
    if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) {
      return {this, it->second};
    }
    nodes_.push_back(Node{p.value, {}, record_, {}, &p});
    param_nodes_.emplace(&p, nodes_.size() - 1);
    return {this, nodes_.size() - 1};
  }

  /**
   * @brief Append the output of an op. `fn` is dropped if no parent requires a gradient.
   */
  Var<T> emit(Tensor<T> value, std::initializer_list<Var<T>> parents, BackwardFn fn)
  {
    bool needs = false;
    if (record_) {
      for (const auto & p : parents) {
        needs = needs || nodes_[p.id()].needs_grad;
      }
    }
    nodes_.push_back(Node{std::move(value), {}, needs, needs ? std::move(fn) : BackwardFn{}, nullptr});
    return {this, nodes_.size() - 1};
  }

  Var<T> emit(Tensor<T> value, const std::vector<Var<T>> & parents, BackwardFn fn)
  {
    bool needs = false;
    if (record_) {
      for (const auto & p : parents) {
        needs = needs || nodes_[p.id()].needs_grad;
      }
    }
    nodes_.push_back(Node{std::move(value), {}, needs, needs ? std::move(fn) : BackwardFn{}, nullptr});
    return {this, nodes_.size() - 1};
  }

  const Tensor<T> & value(std::size_t id) const { return nodes_.at(id).value; }

  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }
  bool needs_grad(const Var<T> & v) const { return nodes_[v.id()].needs_grad; }

  /**
   * @brief Gradient buffer of a node, allocated as zeros on first access.
   */
  Tensor<T> & grad(std::size_t id)
  {
    auto & node = nodes_[id];
    if (node.grad.empty() && !node.value.empty()) {
      node.grad = Tensor<T>(node.value.shape());
    }
    return node.grad;
  }
  Tensor<T> & grad(const Var<T> & v) { return grad(v.id()); }

  bool has_grad(std::size_t id) const { return !nodes_[id].grad.empty(); }

  /**
   * @brief Seed d(loss)/d(loss) = 1 and propagate to every node.
   */
  void backward(const Var<T> & loss)
  {
    if (!record_ || loss.tape() != this || loss.id() >= nodes_.size()) {
      throw SimplException(
        SimplError_t::InvalidInput, "backward requires a recorded forward pass on this tape");
    }
    if (backward_done_) {
      throw SimplException(SimplError_t::InvalidInput, "backward already ran on this tape");
    }
    expect(value(loss.id()).size() == 1, "backward requires a scalar loss");
    backward_done_ = true;
    if (!nodes_[loss.id()].needs_grad) {
      return;
    }
    grad(loss.id())[0] = T(1);
    for (std::size_t i = loss.id() + 1; i-- > 0;) {
      auto & node = nodes_[i];
      if (node.backward && !node.grad.empty()) {
        node.backward(*this, node.grad);
      }
    }
  }

  /**
   * @brief Add `scale` times the gradients of all parameter leaves into `Parameter::grad`.
   */
  void accumulate_parameter_grads(T scale = T(1)) const
  {
    for (const auto & node : nodes_) {
      if (node.param == nullptr || node.grad.empty()) {
        continue;
      }
      auto & dst = node.param->grad;
      if (dst.shape() != node.grad.shape()) {
        dst = Tensor<T>(node.grad.shape());
      }
      for (std::size_t k = 0; k < dst.size(); ++k) {
        dst[k] += scale * node.grad[k];
      }
    }
  }

private:
  struct Node
  {
    Tensor<T> value;
    Tensor<T> grad;
    bool needs_grad;
    BackwardFn backward;
    Parameter<T> * param;
  };

  bool record_;
  bool backward_done_{false};
  std::vector<Node> nodes_;
  std::unordered_map<const Parameter<T> *, std::size_t> param_nodes_;
};
}  // namespace simpl::nn
#endif  // SIMPL__NN__TAPE_HPP_
