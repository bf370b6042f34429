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

#ifndef SIMPL__MODEL__SIMPL_NET_HPP_
#define SIMPL__MODEL__SIMPL_NET_HPP_

#include "simpl/model/config.hpp"
#include "simpl/model/decoder.hpp"
#include "simpl/model/encoders.hpp"
#include "simpl/model/scene_inputs.hpp"
#include "simpl/model/sft.hpp"
#include "simpl/nn/checkpoint.hpp"
#include "simpl/nn/param_store.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <string>

namespace simpl
{
template <typename T>
struct FusionResult
{
  nn::Var<T> tokens;  //!< [N, D] encoder output, agents first.
  nn::Var<T> rpe;     //!< [N, N, D]
  nn::Var<T> fused;   //!< [N, D] after the fusion transformer.
};

/**
 * @brief Encoders, fusion transformer and motion decoder wired together.
 */
template <typename T>
class SimplNet
{
public:
  SimplNet(const ModelConfig & cfg, nn::ParamStore<T> & store)
  : cfg_(cfg),
    actor_encoder_(store, "encoder.actor", cfg.embed_dim),
    map_encoder_(store, "encoder.map", cfg.embed_dim),
    rpe_encoder_(store, "encoder.rpe", cfg.embed_dim),
    sft_(store, "sft", cfg),
    decoder_(store, "decoder", cfg)
  {
  }

  FusionResult<T> encode_and_fuse(nn::Tape<T> & tape, const SceneInputs & in) const
  {
    expect(in.num_agents >= 1, "scene needs at least one agent");
    expect(
      in.actor_features.dim(1) == cfg_.history,
      "history length " + std::to_string(in.actor_features.dim(1)) + " does not match model " +
        std::to_string(cfg_.history));
    FusionResult<T> r;
    auto actors = actor_encoder_(tape.constant(in.actor_features.cast<T>()));
    if (in.num_map > 0) {
      auto map = map_encoder_(tape.constant(in.map_features.cast<T>()), in.map_offsets);
      r.tokens = nn::concat_rows<T>({actors, map});
    } else {
      r.tokens = actors;
    }
    r.rpe = rpe_encoder_(tape.constant(in.rel_pose.cast<T>()));
    r.fused = sft_(r.tokens, r.rpe);
    return r;
  }

  DecoderOutput<T> forward(nn::Tape<T> & tape, const SceneInputs & in) const
  {
    const auto fused = encode_and_fuse(tape, in).fused;
    return decoder_(nn::slice_rows(fused, 0, in.num_agents));
  }

  const ModelConfig & config() const noexcept { return cfg_; }
  const MotionDecoder<T> & decoder() const noexcept { return decoder_; }
  const SymmetricFusionTransformer<T> & sft() const noexcept { return sft_; }

private:
  ModelConfig cfg_;
  ActorEncoder<T> actor_encoder_;
  MapEncoder<T> map_encoder_;
  RpeEncoder<T> rpe_encoder_;
  SymmetricFusionTransformer<T> sft_;
  MotionDecoder<T> decoder_;
};

/**
 * @brief Owns the parameters and the network built on them.
 */
template <typename T>
class Model
{
public:
  using scalar_type = T;

  Model(const ModelConfig & cfg, std::uint64_t seed)
  : cfg_(validated(cfg)), seed_(seed), store_(std::make_unique<nn::ParamStore<T>>(seed)), net_(cfg_, *store_)
  {
  }

  const ModelConfig & config() const noexcept { return cfg_; }
  std::uint64_t seed() const noexcept { return seed_; }
  nn::ParamStore<T> & params() noexcept { return *store_; }
  const nn::ParamStore<T> & params() const noexcept { return *store_; }
  const SimplNet<T> & net() const noexcept { return net_; }

  void save(const std::string & path) const
  {
    const nlohmann::json header = {{"model", cfg_.to_json()}, {"seed", seed_}};
    nn::save_checkpoint(path, *store_, header.dump());
  }

  static std::unique_ptr<Model> load(const std::string & path)
  {
    const auto data = nn::read_checkpoint(path);
    ModelConfig cfg;
    std::uint64_t seed = 0;
    try {
      const auto header = nlohmann::json::parse(data.header);
      cfg.update_from_json(header.at("model"));
      seed = header.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception & e) {
      throw SimplException(SimplError_t::IoError, "corrupt checkpoint header in " + path + ": " + e.what());
    }
    auto model = std::make_unique<Model>(cfg, seed);
    nn::load_parameters(data, model->params());
    return model;
  }

private:
  static const ModelConfig & validated(const ModelConfig & cfg)
  {
    cfg.validate();
    return cfg;
  }

  ModelConfig cfg_;
  std::uint64_t seed_;
  std::unique_ptr<nn::ParamStore<T>> store_;
  SimplNet<T> net_;
};

/**
 * @brief Scalar type recorded in a checkpoint ("f32" or "f64").
 */
inline std::string checkpoint_dtype(const std::string & path)
{
  const auto data = nn::read_checkpoint(path);
  return data.dtypes.empty() ? "f32" : data.dtypes.begin()->second;
}
}  // namespace simpl
#endif  // SIMPL__MODEL__SIMPL_NET_HPP_
