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

#ifndef SIMPL__MODEL__SFT_HPP_
#define SIMPL__MODEL__SFT_HPP_

#include "simpl/model/config.hpp"
#include "simpl/nn/layers.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace simpl
{
/**
 * @brief One symmetric fusion layer.
 *
 * Context c_{i->j} = phi(f_i ++ f_j ++ r_{i->j}) with phi = linear + layer norm + ReLU. The
 * linear part of phi is stored as three D x D blocks (source, target, relative) so the [N, N, 3D]
 * concatenation is never materialized. Token j attends over row j of the context array; the
 * attention and the feed-forward each get a residual add followed by layer normalization. The
 * RPE update is r' = r + psi(C).
 */
template <typename T>
class SftLayer
{
public:
  SftLayer(nn::ParamStore<T> & store, const std::string & name, const ModelConfig & cfg, bool update_rpe)
  : phi_src_(store, name + ".phi.src", cfg.embed_dim, cfg.embed_dim, false),
    phi_tgt_(store, name + ".phi.tgt", cfg.embed_dim, cfg.embed_dim, false),
    phi_rel_(store, name + ".phi.rel", cfg.embed_dim, cfg.embed_dim, true),
    phi_norm_(store, name + ".phi.norm", cfg.embed_dim),
    attn_(store, name + ".attn", cfg.embed_dim, cfg.heads),
    attn_norm_(store, name + ".attn_norm", cfg.embed_dim),
    ffn_in_(store, name + ".ffn.in", cfg.embed_dim, cfg.ffn_dim()),
    ffn_out_(store, name + ".ffn.out", cfg.ffn_dim(), cfg.embed_dim),
    ffn_norm_(store, name + ".ffn_norm", cfg.embed_dim),
    update_rpe_(update_rpe)
  {
    if (update_rpe_) {
      psi_ = nn::LinearNormRelu<T>(store, name + ".psi", cfg.embed_dim, cfg.embed_dim);
    }
  }

  /**
   * @brief Context array C [N, N, D]; row j holds c_{i->j} for all i.
   */
  nn::Var<T> context(const nn::Var<T> & tokens, const nn::Var<T> & rpe) const
  {
    return nn::relu(phi_norm_(nn::pair_broadcast_add(phi_src_(tokens), phi_tgt_(tokens), phi_rel_(rpe))));
  }

  /**
   * @return Updated (tokens [N, D], rpe [N, N, D]). The rpe is returned unchanged when this
   * layer does not update it.
   */
  std::pair<nn::Var<T>, nn::Var<T>> operator()(const nn::Var<T> & tokens, const nn::Var<T> & rpe) const
  {
    const auto ctx = context(tokens, rpe);
    const auto attended = attn_norm_(nn::add(tokens, attn_(tokens, ctx)));
    const auto fused = ffn_norm_(nn::add(attended, ffn_out_(nn::relu(ffn_in_(attended)))));
    if (!update_rpe_) {
      return {fused, rpe};
    }
    return {fused, nn::add(rpe, psi_(ctx))};
  }

  bool updates_rpe() const noexcept { return update_rpe_; }

private:
  nn::Linear<T> phi_src_;
  nn::Linear<T> phi_tgt_;
  nn::Linear<T> phi_rel_;
  nn::LayerNorm<T> phi_norm_;
  nn::MultiHeadAttention<T> attn_;
  nn::LayerNorm<T> attn_norm_;
  nn::Linear<T> ffn_in_;
  nn::Linear<T> ffn_out_;
  nn::LayerNorm<T> ffn_norm_;
  nn::LinearNormRelu<T> psi_;
  bool update_rpe_;
};

/**
 * @brief L stacked fusion layers. The last layer never updates the RPE since its output would
 * be discarded.
 */
template <typename T>
class SymmetricFusionTransformer
{
public:
  SymmetricFusionTransformer(nn::ParamStore<T> & store, const std::string & name, const ModelConfig & cfg)
  {
    for (std::size_t l = 0; l < cfg.sft_layers; ++l) {
      const bool update = cfg.rpe_update && l + 1 < cfg.sft_layers;
      layers_.emplace_back(store, name + ".layer" + std::to_string(l), cfg, update);
    }
  }

  nn::Var<T> operator()(const nn::Var<T> & tokens, const nn::Var<T> & rpe) const
  {
    auto state = std::make_pair(tokens, rpe);
    for (const auto & layer : layers_) {
      state = layer(state.first, state.second);
    }
    return state.first;
  }

  const std::vector<SftLayer<T>> & layers() const noexcept { return layers_; }

private:
  std::vector<SftLayer<T>> layers_;
};
}  // namespace simpl
#endif  // SIMPL__MODEL__SFT_HPP_
