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

#ifndef SIMPL__NN__ADAM_HPP_
#define SIMPL__NN__ADAM_HPP_

#include "simpl/nn/param_store.hpp"

#include <cmath>
#include <map>
#include <string>

namespace simpl::nn
{
/**
 * @brief Adam with bias correction. Moments start at zero and are keyed by parameter name.
 */
template <typename T>
class Adam
{
public:
  explicit Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
  : beta1_(beta1), beta2_(beta2), eps_(eps)
  {
  }

  void step(ParamStore<T> & store, double lr)
  {
    ++steps_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
    for (auto & [name, p] : store.params()) {
      auto & st = state_[name];
      if (st.m.size() != p.value.size()) {
        st.m.assign(p.value.size(), 0.0);
        st.v.assign(p.value.size(), 0.0);
      }
      for (std::size_t i = 0; i < p.value.size(); ++i) {
        const double g = static_cast<double>(p.grad[i]);
        st.m[i] = beta1_ * st.m[i] + (1.0 - beta1_) * g;
        st.v[i] = beta2_ * st.v[i] + (1.0 - beta2_) * g * g;
        const double update = (st.m[i] / c1) / (std::sqrt(st.v[i] / c2) + eps_);
        p.value[i] = static_cast<T>(static_cast<double>(p.value[i]) - lr * update);
      }
    }
  }

  long steps() const noexcept { return steps_; }

private:
  struct Moments
  {
    std::vector<double> m;
    std::vector<double> v;
  };

  double beta1_;
  double beta2_;
  double eps_;
  long steps_{0};
  std::map<std::string, Moments> state_;
};
}  // namespace simpl::nn
#endif  // SIMPL__NN__ADAM_HPP_
