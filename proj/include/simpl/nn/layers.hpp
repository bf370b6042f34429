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

#ifndef SIMPL__NN__LAYERS_HPP_
#define SIMPL__NN__LAYERS_HPP_

#include "simpl/nn/ops.hpp"
#include "simpl/nn/param_store.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace simpl::nn
{
template <typename T>
class Linear
{
public:
  Linear() = default;

  Linear(ParamStore<T> & store, const std::string & name, std::size_t in, std::size_t out, bool bias = true)
  : weight_(&store.create(name + ".weight", {out, in}, Init::Uniform, in)),
    bias_(bias ? &store.create(name + ".bias", {out}, Init::Zeros) : nullptr)
  {
  }

  Var<T> operator()(const Var<T> & x) const
  {
    Tape<T> & tape = *x.tape();
    std::optional<Var<T>> b;
    if (bias_) {
      b = tape.parameter(*bias_);
    }
    return linear(x, tape.parameter(*weight_), b);
  }

  Parameter<T> & weight() const { return *weight_; }
  Parameter<T> * bias() const { return bias_; }

private:
  Parameter<T> * weight_{nullptr};
  Parameter<T> * bias_{nullptr};
};

template <typename T>
class LayerNorm
{
public:
  LayerNorm() = default;

  LayerNorm(ParamStore<T> & store, const std::string & name, std::size_t dim)
  : gain_(&store.create(name + ".gain", {dim}, Init::Ones)),
    bias_(&store.create(name + ".bias", {dim}, Init::Zeros))
  {
  }

  Var<T> operator()(const Var<T> & x) const
  {
    Tape<T> & tape = *x.tape();
    return layer_norm(x, tape.parameter(*gain_), tape.parameter(*bias_));
  }

private:
  Parameter<T> * gain_{nullptr};
  Parameter<T> * bias_{nullptr};
};

/**
 * @brief Linear layer followed by layer normalization and ReLU.
 */
template <typename T>
class LinearNormRelu
{
public:
  LinearNormRelu() = default;

  LinearNormRelu(ParamStore<T> & store, const std::string & name, std::size_t in, std::size_t out)
  : linear_(store, name + ".linear", in, out), norm_(store, name + ".norm", out)
  {
  }

  Var<T> operator()(const Var<T> & x) const { return relu(norm_(linear_(x))); }

private:
  Linear<T> linear_;
  LayerNorm<T> norm_;
};

/**
 * @brief Kernel-3 temporal convolution followed by layer normalization and ReLU.
 */
template <typename T>
class ConvBlock
{
public:
  ConvBlock() = default;

  ConvBlock(
    ParamStore<T> & store, const std::string & name, std::size_t in, std::size_t out,
    std::size_t stride)
  : weight_(&store.create(name + ".conv.weight", {out, in, 3}, Init::Uniform, in * 3)),
    bias_(&store.create(name + ".conv.bias", {out}, Init::Zeros)),
    norm_(store, name + ".norm", out),
    stride_(stride)
  {
  }

  Var<T> operator()(const Var<T> & x) const
  {
    Tape<T> & tape = *x.tape();
    return relu(norm_(conv1d(x, tape.parameter(*weight_), tape.parameter(*bias_), stride_)));
  }

private:
  Parameter<T> * weight_{nullptr};
  Parameter<T> * bias_{nullptr};
  LayerNorm<T> norm_;
  std::size_t stride_{1};
};

/**
 * @brief Multi-head attention in which query row m attends over its own S context vectors.
 *
 * The key projection has no bias: it would shift each query's logits uniformly.
 */
template <typename T>
class MultiHeadAttention
{
public:
  MultiHeadAttention() = default;

  MultiHeadAttention(ParamStore<T> & store, const std::string & name, std::size_t dim, std::size_t heads)
  : query_(store, name + ".query", dim, dim),
    key_(store, name + ".key", dim, dim, false),
    value_(store, name + ".value", dim, dim),
    out_(store, name + ".out", dim, dim),
    heads_(heads)
  {
    if (heads == 0 || dim % heads != 0) {
      throw SimplException(
        SimplError_t::InvalidInput, "embedding dim " + std::to_string(dim) +
                                      " is not divisible by heads " + std::to_string(heads));
    }
  }

  /**
   * @param query [M, D]
   * @param context [M, S, D], used as both keys and values.
   */
  Var<T> operator()(const Var<T> & query, const Var<T> & context) const
  {
    return out_(attention(query_(query), key_(context), value_(context), heads_));
  }

  std::size_t heads() const noexcept { return heads_; }

private:
  Linear<T> query_;
  Linear<T> key_;
  Linear<T> value_;
  Linear<T> out_;
  std::size_t heads_{1};
};
}  // namespace simpl::nn
#endif  // SIMPL__NN__LAYERS_HPP_
