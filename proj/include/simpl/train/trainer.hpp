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

#ifndef SIMPL__TRAIN__TRAINER_HPP_
#define SIMPL__TRAIN__TRAINER_HPP_

#include "simpl/common/exception.hpp"
#include "simpl/metrics/metrics.hpp"
#include "simpl/model/prediction.hpp"
#include "simpl/model/scene_inputs.hpp"
#include "simpl/model/simpl_net.hpp"
#include "simpl/nn/adam.hpp"
#include "simpl/scene/scene_io.hpp"
#include "simpl/synth/generator.hpp"
#include "simpl/train/losses.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace simpl::train
{
/**
 * @brief Step schedule: `initial` through epoch `decay_epoch` (1-based), `final_lr` after.
 */
struct LrSchedule
{
  double initial{1e-3};
  double final_lr{1e-4};
  std::size_t decay_epoch{40};

  double at(std::size_t epoch) const noexcept { return epoch <= decay_epoch ? initial : final_lr; }
};

struct TrainConfig
{
  ModelConfig model;
  LossConfig loss;
  LrSchedule lr;
  std::size_t epochs{50};
  std::size_t batch_size{128};
  std::uint64_t seed{0};
  std::size_t val_every{1};  // epochs between validation passes, 0 disables

  void validate() const
  {
    model.validate();
    expect(batch_size >= 1, "batch_size must be >= 1");
    expect(loss.omega >= 0.0 && loss.omega <= 1.0, "omega must be in [0,1]");
    expect(loss.margin >= 0.0, "margin must be >= 0");
    expect(lr.initial >= 0.0 && lr.final_lr >= 0.0, "learning rates must be >= 0");
  }

  Json to_json() const
  {
    Json j = model.to_json();
    j["omega"] = loss.omega;
    j["margin"] = loss.margin;
    j["yaw_loss"] = loss.yaw_loss;
    j["lr_schedule"] = {{"initial", lr.initial}, {"final", lr.final_lr}, {"decay_epoch", lr.decay_epoch}};
    j["epochs"] = epochs;
    j["batch_size"] = batch_size;
    j["seed"] = seed;
    j["val_every"] = val_every;
    return j;
  }

  static TrainConfig from_json(const Json & j)
  {
    TrainConfig c;
    c.model.update_from_json(j);
    try {
      c.loss.omega = j.value("omega", c.loss.omega);
      c.loss.margin = j.value("margin", c.loss.margin);
      c.loss.yaw_loss = j.value("yaw_loss", c.loss.yaw_loss);
      if (j.contains("lr_schedule")) {
        const auto & s = j.at("lr_schedule");
        c.lr.initial = s.value("initial", c.lr.initial);
        c.lr.final_lr = s.value("final", c.lr.final_lr);
        c.lr.decay_epoch = s.value("decay_epoch", c.lr.decay_epoch);
      }
      c.epochs = j.value("epochs", c.epochs);
      c.batch_size = j.value("batch_size", c.batch_size);
      c.seed = j.value("seed", c.seed);
      c.val_every = j.value("val_every", c.val_every);
    } catch (const nlohmann::json::exception & e) {
      throw SimplException(SimplError_t::InvalidInput, std::string("bad training config: ") + e.what());
    }
    c.validate();
    return c;
  }
};

/**
 * @brief Evaluate target agents of every scene with single-pass prediction.
 */
template <typename T>
std::vector<metrics::AgentMetrics> evaluate_corpus(const Model<T> & model, const std::vector<Scene> & scenes)
{
  std::vector<metrics::AgentMetrics> rows;
  for (const auto & s : scenes) {
    const auto r = metrics::evaluate_scene(predict(model, s), s);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return rows;
}

struct EpochLog
{
  std::size_t epoch{0};
  double lr{0.0};
  LossBreakdown loss;
  std::optional<metrics::MetricReport> val;
};

inline std::string epoch_csv_header()
{
  return "epoch,lr,loss,reg_pos,reg_yaw,cls,train_min_fde,val_min_ade,val_min_fde,val_miss_rate,"
         "val_brier_min_fde,val_min_aye,val_min_fye\n";
}

inline std::string epoch_csv_row(const EpochLog & e)
{
  std::ostringstream os;
  os << std::setprecision(9) << e.epoch << ',' << e.lr << ',' << e.loss.total << ',' << e.loss.reg_pos << ','
     << e.loss.reg_yaw << ',' << e.loss.cls << ',' << e.loss.min_fde;
  if (e.val) {
    os << ',' << e.val->min_ade << ',' << e.val->min_fde << ',' << e.val->miss_rate << ','
       << e.val->brier_min_fde << ',' << e.val->min_aye << ',' << e.val->min_fye;
  } else {
    os << ",,,,,,";
  }
  os << '\n';
  return os.str();
}

/**
 * @brief Adam training loop over a fixed scene corpus.
 *
 * Scenes of a batch are processed one tape at a time and their gradients summed in batch
 * order before the single optimizer step, so results do not depend on scheduling.
 */
template <typename T>
class Trainer
{
public:
  Trainer(Model<T> & model, const TrainConfig & cfg) : model_(model), cfg_(cfg) { cfg_.validate(); }

  const TrainConfig & config() const noexcept { return cfg_; }
  nn::Adam<T> & optimizer() noexcept { return adam_; }

  /**
   * @brief One optimizer step on `scenes[batch[0..]]`; returns the pre-step loss.
   */
  LossBreakdown step(const std::vector<std::size_t> & batch, double lr)
  {
    auto & store = model_.params();
    store.zero_grad();
    std::size_t agents = 0;
    for (std::size_t i : batch) {
      agents += targets_[i].agents.size();
    }
    std::vector<LossBreakdown> parts;
    for (std::size_t i : batch) {
      if (targets_[i].agents.empty()) {
        continue;
      }
      nn::Tape<T> tape(true);
      const auto out = model_.net().forward(tape, inputs_[i]);
      auto loss = scene_loss(tape, out, targets_[i], cfg_.loss);
      if (!std::isfinite(loss.parts.total)) {
        throw SimplException(
          SimplError_t::NumericFailure, "non-finite training loss on scene '" + ids_[i] + "'");
      }
      tape.backward(loss.total);
      tape.accumulate_parameter_grads(
        static_cast<T>(static_cast<double>(loss.parts.agents) / static_cast<double>(agents)));
      parts.push_back(std::move(loss.parts));
    }
    if (agents > 0) {
      adam_.step(store, lr);
    }
    return combine(parts);
  }

  void set_data(const std::vector<Scene> & scenes)
  {
    expect(!scenes.empty(), "training corpus is empty");
    inputs_.clear();
    targets_.clear();
    ids_.clear();
    for (const auto & s : scenes) {
      validate_scene(s);
      expect(
        s.history_len == model_.config().history && s.future_len == model_.config().horizon,
        "scene '" + s.scenario_id + "' history/horizon does not match the model config");
      inputs_.push_back(prepare_scene(s));
      targets_.push_back(build_targets(s, inputs_.back().anchors));
      ids_.push_back(s.scenario_id);
    }
  }

  /**
   * @brief Run all epochs. `on_epoch` sees every log entry as it is produced.
   */
  std::vector<EpochLog> fit(
    const std::vector<Scene> & train, const std::vector<Scene> * val = nullptr,
    const std::function<void(const EpochLog &)> & on_epoch = {})
  {
    set_data(train);
    std::vector<EpochLog> logs;
    std::vector<std::size_t> order(train.size());
    for (std::size_t epoch = 1; epoch <= cfg_.epochs; ++epoch) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::mt19937_64 rng(synth::splitmix64(cfg_.seed ^ synth::splitmix64(epoch)));
      std::shuffle(order.begin(), order.end(), rng);
      EpochLog log;
      log.epoch = epoch;
      log.lr = cfg_.lr.at(epoch);
      std::vector<LossBreakdown> parts;
      for (std::size_t b = 0; b < order.size(); b += cfg_.batch_size) {
        const std::vector<std::size_t> batch(
          order.begin() + static_cast<long>(b),
          order.begin() + static_cast<long>(std::min(order.size(), b + cfg_.batch_size)));
        parts.push_back(step(batch, log.lr));
      }
      log.loss = combine(parts);
      if (val != nullptr && !val->empty() && cfg_.val_every > 0 &&
          (epoch % cfg_.val_every == 0 || epoch == cfg_.epochs)) {
        const auto rows = evaluate_corpus(model_, *val);
        log.val = metrics::aggregate(rows, model_.config().modes);
      }
      if (on_epoch) {
        on_epoch(log);
      }
      logs.push_back(std::move(log));
    }
    return logs;
  }

private:
  Model<T> & model_;
  TrainConfig cfg_;
  nn::Adam<T> adam_{};
  std::vector<SceneInputs> inputs_;
  std::vector<SceneTargets> targets_;
  std::vector<std::string> ids_;
};
}  // namespace simpl::train
#endif  // SIMPL__TRAIN__TRAINER_HPP_
