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

#ifndef SIMPL__SIMPL_HPP_
#define SIMPL__SIMPL_HPP_

#include "simpl/bezier/bezier.hpp"
#include "simpl/bezier/fit.hpp"
#include "simpl/common/exception.hpp"
#include "simpl/common/geometry.hpp"
#include "simpl/io/prediction_io.hpp"
#include "simpl/metrics/metrics.hpp"
#include "simpl/model/config.hpp"
#include "simpl/model/prediction.hpp"
#include "simpl/model/simpl_net.hpp"
#include "simpl/nn/adam.hpp"
#include "simpl/nn/checkpoint.hpp"
#include "simpl/scene/scene_io.hpp"
#include "simpl/study/bench.hpp"
#include "simpl/study/coefficients.hpp"
#include "simpl/synth/generator.hpp"
#include "simpl/synth/oracle.hpp"
#include "simpl/train/trainer.hpp"

#endif  // SIMPL__SIMPL_HPP_
