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

#ifndef SIMPL__TESTS__TEST_UTIL_HPP_
#define SIMPL__TESTS__TEST_UTIL_HPP_

#include "simpl/model/simpl_net.hpp"
#include "simpl/nn/ops.hpp"
#include "simpl/nn/param_store.hpp"
#include "simpl/nn/tape.hpp"
#include "simpl/synth/generator.hpp"
#include "simpl/train/losses.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace simpl::testing
{
using Loss = std::function<nn::Var<double>(nn::Tape<double> &)>;

inline nn::Tensor<double> random_tensor(const nn::Shape & shape, std::mt19937_64 & rng, double scale = 1.0)
{
  std::uniform_real_distribution<double> dist(-scale, scale);
  nn::Tensor<double> t(shape);
  for (auto & v : t.values()) {
    v = dist(rng);
  }
  return t;
}

/**
 * @brief Random linear functional of `y`, giving a scalar whose gradient touches every entry.
 */
inline nn::Var<double> project(const nn::Var<double> & y, std::uint64_t seed = 99)
{
  std::mt19937_64 rng(seed);
  const std::size_t n = y.value().size();
  auto w = random_tensor({1, n}, rng);
  return nn::sum_all(nn::linear(nn::reshape(y, {1, n}), y.tape()->constant(std::move(w))));
}

struct GradCheckResult
{
  double max_rel_error{0.0};
  std::string worst;
  bool any_nonzero{false};
  std::map<std::string, double> analytic_norm;
  std::map<std::string, double> numeric_norm;
};

/**
 * @brief Central finite differences against reverse mode for every entry of `params`.
 *
 * The error of one parameter tensor is |g_a - g_n| / max(|g_a|, |g_n|, floor) in the 2-norm.
 * analytic_norm covers the whole tensor, numeric_norm only the probed entries.
 * At most `max_entries` evenly spaced entries per tensor are probed (0 probes all).
 */
inline GradCheckResult gradient_check(
  const std::vector<nn::Parameter<double> *> & params, const Loss & f, std::size_t max_entries = 0,
  double h = 1e-5, double floor = 1e-6)
{
  for (auto * p : params) {
    p->grad = nn::Tensor<double>(p->value.shape());
  }
  {
    nn::Tape<double> tape(true);
    const auto y = f(tape);
    tape.backward(y);
    tape.accumulate_parameter_grads();
  }
  auto eval = [&] {
    nn::Tape<double> tape(false);
    return f(tape).value()[0];
  };
  GradCheckResult res;
  for (auto * p : params) {
    double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    const std::size_t size = p->value.size();
    const std::size_t probes = max_entries == 0 ? size : std::min(size, max_entries);
    for (std::size_t k = 0; k < probes; ++k) {
      const std::size_t i = k * size / probes;
      const double orig = p->value[i];
      p->value[i] = orig + h;
      const double fp = eval();
      p->value[i] = orig - h;
      const double fm = eval();
      p->value[i] = orig;
      const double num = (fp - fm) / (2.0 * h);
      const double an = p->grad[i];
      diff2 += (an - num) * (an - num);
      a2 += an * an;
      n2 += num * num;
    }
    const double rel = std::sqrt(diff2) / std::max({std::sqrt(a2), std::sqrt(n2), floor});
    res.any_nonzero = res.any_nonzero || a2 > 0.0;
    double full2 = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      full2 += p->grad[i] * p->grad[i];
    }
    res.analytic_norm[p->name] = std::sqrt(full2);
    res.numeric_norm[p->name] = std::sqrt(n2);
    if (rel >= res.max_rel_error) {
      res.max_rel_error = rel;
      res.worst = p->name;
    }
  }
  return res;
}

inline std::string read_bytes(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<nn::Parameter<double> *> all_params(nn::ParamStore<double> & store)
{
  std::vector<nn::Parameter<double> *> out;
  for (auto & [_, p] : store.params()) {
    out.push_back(&p);
  }
  return out;
}

/**
 * @brief Small synthetic scene generator config used across tests.
 */
inline synth::GeneratorConfig small_corpus(std::uint64_t seed, std::size_t scenes, double noise = 0.2)
{
  synth::GeneratorConfig g;
  g.seed = seed;
  g.num_scenes = scenes;
  g.noise_std = noise;
  return g;
}

/**
 * @brief Tiny network used by the full-model gradient checks: D = 16, L = 2, 2 heads, K = 2, n = 3.
 */
inline ModelConfig tiny_config()
{
  ModelConfig c;
  c.embed_dim = 16;
  c.sft_layers = 2;
  c.heads = 2;
  c.modes = 2;
  c.degree = 3;
  return c;
}

/**
 * @brief Scene with at most 6 instances.
 */
inline Scene tiny_scene(std::uint64_t seed)
{
  auto g = small_corpus(seed, 1);
  g.min_agents = 1;
  g.max_agents = 3;
  g.min_lanes = 2;
  g.max_lanes = 3;
  return synth::generate_scene(g, 0);
}

/**
 * @brief Training loss plus random functionals of every decoder output.
 */
inline nn::Var<double> model_objective(
  const SimplNet<double> & net, nn::Tape<double> & tape, const SceneInputs & in, const train::SceneTargets & tg)
{
  const auto out = net.forward(tape, in);
  const auto loss = train::scene_loss(tape, out, tg, train::LossConfig{});
  return nn::weighted_sum<double>(
    {loss.total, project(out.positions, 1), project(out.scores, 2), project(out.yaws, 3)}, {1.0, 0.01, 1.0, 1.0});
}
}  // namespace simpl::testing
#endif  // SIMPL__TESTS__TEST_UTIL_HPP_
