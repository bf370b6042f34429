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

#ifndef SIMPL__MODEL__DECODER_HPP_
#define SIMPL__MODEL__DECODER_HPP_

#include "simpl/bezier/bezier.hpp"
#include "simpl/model/config.hpp"
#include "simpl/nn/layers.hpp"
#include "simpl/scene/anchor.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace simpl
{
/**
 * @brief Decoder outputs for N_a agents in their local frames.
 */
template <typename T>
struct DecoderOutput
{
  nn::Var<T> control_points;  //!< [N_a * K, n + 1, 2]
  nn::Var<T> scores;          //!< [N_a, K], softmax probabilities
  nn::Var<T> positions;       //!< [N_a * K, T, 2]
  nn::Var<T> velocities;      //!< [N_a * K, T, 2], m/s
  nn::Var<T> yaws;            //!< [N_a * K, T, 2], unit vectors
};

/**
 * @brief K independent regression heads (D -> 2D -> (n + 1) * 2) and one classification head
 * (D -> D -> K, softmax) on each fused actor token.
 */
template <typename T>
class MotionDecoder
{
public:
  MotionDecoder(nn::ParamStore<T> & store, const std::string & name, const ModelConfig & cfg)
  : modes_(cfg.modes), degree_(cfg.degree), cls_hidden_(store, name + ".cls.hidden", cfg.embed_dim, cfg.embed_dim),
    cls_out_(store, name + ".cls.out", cfg.embed_dim, cfg.modes)
  {
    const std::size_t ctrl = (static_cast<std::size_t>(cfg.degree) + 1) * 2;
    for (std::size_t k = 0; k < cfg.modes; ++k) {
      const std::string head = name + ".reg" + std::to_string(k);
      reg_hidden_.emplace_back(store, head + ".hidden", cfg.embed_dim, 2 * cfg.embed_dim);
      reg_out_.emplace_back(store, head + ".out", 2 * cfg.embed_dim, ctrl);
    }
    const auto times = bezier::normalized_times(cfg.horizon);
    position_basis_ = bezier::basis_matrix(cfg.degree, times).cast<T>();
    velocity_basis_ = bezier::velocity_matrix(cfg.degree, times, cfg.tau_max()).cast<T>();
  }

  /**
   * @param tokens [N_a, D] fused actor tokens.
   */
  DecoderOutput<T> operator()(const nn::Var<T> & tokens) const
  {
    const std::size_t agents = tokens.shape()[0];
    const std::size_t ncp = static_cast<std::size_t>(degree_) + 1;
    std::vector<nn::Var<T>> heads;
    heads.reserve(modes_);
    for (std::size_t k = 0; k < modes_; ++k) {
      heads.push_back(reg_out_[k](nn::relu(reg_hidden_[k](tokens))));
    }
    DecoderOutput<T> out;
    out.control_points = nn::reshape(nn::stack_axis1(heads), {agents * modes_, ncp, 2});
    out.scores = nn::softmax(cls_out_(nn::relu(cls_hidden_(tokens))));
    out.positions = nn::apply_const_matrix(position_basis_, out.control_points);
    out.velocities = nn::apply_const_matrix(velocity_basis_, out.control_points);
    out.yaws = nn::yaw_from_velocity(out.velocities, static_cast<T>(bezier::kMinYawSpeed));
    return out;
  }

  const nn::Tensor<T> & position_basis() const noexcept { return position_basis_; }
  const nn::Tensor<T> & velocity_basis() const noexcept { return velocity_basis_; }

private:
  std::size_t modes_;
  int degree_;
  std::vector<nn::Linear<T>> reg_hidden_;
  std::vector<nn::Linear<T>> reg_out_;
  nn::Linear<T> cls_hidden_;
  nn::Linear<T> cls_out_;
  nn::Tensor<T> position_basis_;
  nn::Tensor<T> velocity_basis_;
};
}  // namespace simpl
#endif  // SIMPL__MODEL__DECODER_HPP_
