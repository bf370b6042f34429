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

#ifndef SIMPL__NN__PARAM_STORE_HPP_
#define SIMPL__NN__PARAM_STORE_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/nn/tape.hpp"
#include "simpl/nn/tensor.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>

namespace simpl::nn
{
enum class Init {
  Uniform,  //!< U(-1/sqrt(fan_in), 1/sqrt(fan_in))
  Zeros,
  Ones,
};

/**
 * @brief Named parameters in deterministic (lexicographic) order.
 *
 * Each parameter is initialized from its own generator seeded by (store seed, name), so values
 * do not depend on registration order.
 */
template <typename T>
class ParamStore
{
public:
  using container_type = std::map<std::string, Parameter<T>>;

  explicit ParamStore(std::uint64_t seed = 0) : seed_(seed) {}

  ParamStore(const ParamStore &) = delete;
  ParamStore & operator=(const ParamStore &) = delete;
  ParamStore(ParamStore &&) = default;
  ParamStore & operator=(ParamStore &&) = default;

  Parameter<T> & create(const std::string & name, const Shape & shape, Init init, std::size_t fan_in = 1)
  {
    expect(!params_.count(name), "duplicate parameter name: " + name);
    Parameter<T> p{name, Tensor<T>(shape), Tensor<T>(shape)};
    switch (init) {
      case Init::Zeros:
        break;
      case Init::Ones:
        p.value.fill(T(1));
        break;
      case Init::Uniform: {
        std::seed_seq seq{
          static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
          static_cast<std::uint32_t>(hash(name)), static_cast<std::uint32_t>(hash(name) >> 32)};
        std::mt19937_64 rng(seq);
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        for (auto & v : p.value.values()) {
          v = static_cast<T>(dist(rng));
        }
        break;
      }
    }
    return params_.emplace(name, std::move(p)).first->second;
  }

  Parameter<T> & at(const std::string & name)
  {
    auto it = params_.find(name);
    expect(it != params_.end(), "unknown parameter: " + name);
    return it->second;
  }
  const Parameter<T> & at(const std::string & name) const
  {
    auto it = params_.find(name);
    expect(it != params_.end(), "unknown parameter: " + name);
    return it->second;
  }

  bool contains(const std::string & name) const { return params_.count(name) > 0; }

  container_type & params() noexcept { return params_; }
  const container_type & params() const noexcept { return params_; }

  std::size_t size() const noexcept { return params_.size(); }

  std::size_t parameter_count() const noexcept
  {
    std::size_t n = 0;
    for (const auto & [_, p] : params_) {
      n += p.value.size();
    }
    return n;
  }

  void zero_grad()
  {
    for (auto & [_, p] : params_) {
      p.grad.fill(T(0));
    }
  }

  std::uint64_t seed() const noexcept { return seed_; }

private:
  static std::uint64_t hash(const std::string & s) noexcept
  {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  }

  std::uint64_t seed_;
  container_type params_;
};
}  // namespace simpl::nn
#endif  // SIMPL__NN__PARAM_STORE_HPP_
