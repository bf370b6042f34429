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

#ifndef SIMPL__MODEL__ENCODERS_HPP_
#define SIMPL__MODEL__ENCODERS_HPP_

#include "simpl/nn/layers.hpp"
#include "simpl/scene/normalize.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace simpl
{
/**
 * @brief Temporal-convolution actor encoder: three conv blocks (32, 64, 128 channels, strides
 * 1, 2, 2), average pooling over the remaining steps, then a linear layer to D.
 */
template <typename T>
class ActorEncoder
{
public:
  ActorEncoder(nn::ParamStore<T> & store, const std::string & name, std::size_t embed_dim)
  : block1_(store, name + ".block1", kAgentFeatureDim, 32, 1),
    block2_(store, name + ".block2", 32, 64, 2),
    block3_(store, name + ".block3", 64, 128, 2),
    out_(store, name + ".out", 128, embed_dim)
  {
  }

  /**
   * @param history [N_a, H, 3] local features.
   * @return [N_a, D] tokens.
   */
  nn::Var<T> operator()(const nn::Var<T> & history) const
  {
    return out_(nn::mean_pool(block3_(block2_(block1_(history)))));
  }

private:
  nn::ConvBlock<T> block1_;
  nn::ConvBlock<T> block2_;
  nn::ConvBlock<T> block3_;
  nn::Linear<T> out_;
};

/**
 * @brief Point-set map encoder: shared per-point MLP (4 -> 64 -> 128), max-pool per polyline,
 * then 128 -> D.
 */
template <typename T>
class MapEncoder
{
public:
  MapEncoder(nn::ParamStore<T> & store, const std::string & name, std::size_t embed_dim)
  : point1_(store, name + ".point1", kMapFeatureDim, 64),
    point2_(store, name + ".point2", 64, 128),
    out_(store, name + ".out", 128, embed_dim)
  {
  }

  /**
   * @param points [P_total, 4] local point features of all polylines.
   * @param offsets Row offsets delimiting each polyline (N_m + 1 entries).
   * @return [N_m, D] tokens.
   */
  nn::Var<T> operator()(const nn::Var<T> & points, const std::vector<std::size_t> & offsets) const
  {
    for (std::size_t s = 0; s + 1 < offsets.size(); ++s) {
      expect(offsets[s + 1] - offsets[s] >= 2, "malformed polyline: fewer than 2 points");
    }
    return out_(nn::segment_max(point2_(point1_(points)), offsets));
  }

private:
  nn::LinearNormRelu<T> point1_;
  nn::LinearNormRelu<T> point2_;
  nn::LinearNormRelu<T> out_;
};

/**
 * @brief Pointwise MLP 5 -> D over the relative pose tensor.
 */
template <typename T>
class RpeEncoder
{
public:
  RpeEncoder(nn::ParamStore<T> & store, const std::string & name, std::size_t embed_dim)
  : hidden_(store, name + ".hidden", 5, embed_dim), out_(store, name + ".out", embed_dim, embed_dim)
  {
  }

  /**
   * @param rel [N, N, 5]
   * @return [N, N, D]
   */
  nn::Var<T> operator()(const nn::Var<T> & rel) const { return out_(hidden_(rel)); }

private:
  nn::LinearNormRelu<T> hidden_;
  nn::Linear<T> out_;
};
}  // namespace simpl
#endif  // SIMPL__MODEL__ENCODERS_HPP_
