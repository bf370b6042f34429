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

#ifndef SIMPL__MODEL__CONFIG_HPP_
#define SIMPL__MODEL__CONFIG_HPP_

#include "simpl/common/exception.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>

namespace simpl
{
/**
 * @brief Network shape. Defaults are the full-size configuration.
 */
struct ModelConfig
{
  std::size_t embed_dim{128};
  std::size_t sft_layers{4};
  std::size_t heads{8};
  std::size_t modes{6};
  int degree{5};
  std::size_t horizon{30};  // future steps T
  std::size_t history{20};  // observed steps H
  double dt{0.1};           // s
  bool rpe_update{true};

  std::size_t ffn_dim() const noexcept { return 2 * embed_dim; }
  double tau_max() const noexcept { return static_cast<double>(horizon) * dt; }

  void validate() const
  {
    expect(embed_dim > 0, "embed_dim must be positive");
    expect(sft_layers >= 1, "sft_layers must be >= 1");
    if (heads == 0 || embed_dim % heads != 0) {
      throw SimplException(
        SimplError_t::InvalidInput, "embed_dim " + std::to_string(embed_dim) +
                                      " is not divisible by heads " + std::to_string(heads));
    }
    expect(modes >= 1, "modes must be >= 1");
    expect(degree >= 1, "degree must be >= 1");
    expect(horizon >= 1, "horizon must be >= 1");
    expect(history >= 1, "history must be >= 1");
    expect(dt > 0.0, "dt must be positive");
  }

  nlohmann::json to_json() const
  {
    return {{"embed_dim", embed_dim}, {"sft_layers", sft_layers}, {"heads", heads},
            {"modes", modes},         {"degree", degree},         {"horizon", horizon},
            {"history", history},     {"dt", dt},                 {"rpe_update", rpe_update}};
  }

  /**
   * @brief Read known keys from `j`; absent keys keep their current values.
   */
  void update_from_json(const nlohmann::json & j)
  {
    try {
      embed_dim = j.value("embed_dim", embed_dim);
      sft_layers = j.value("sft_layers", sft_layers);
      heads = j.value("heads", heads);
      modes = j.value("modes", modes);
      degree = j.value("degree", degree);
      horizon = j.value("horizon", horizon);
      history = j.value("history", history);
      dt = j.value("dt", dt);
      rpe_update = j.value("rpe_update", rpe_update);
    } catch (const nlohmann::json::exception & e) {
      throw SimplException(SimplError_t::InvalidInput, std::string("bad model config: ") + e.what());
    }
  }

  bool operator==(const ModelConfig &) const = default;
};
}  // namespace simpl
#endif  // SIMPL__MODEL__CONFIG_HPP_
