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

#include "simpl/simpl.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace
{
using simpl::SimplError_t;
using simpl::SimplException;

std::vector<simpl::Scene> load_scenes(const std::string & path)
{
  if (fs::is_directory(path)) {
    return simpl::synth::read_corpus(path);
  }
  return {simpl::read_scene(path)};
}

template <typename T>
int run_train(
  const simpl::train::TrainConfig & cfg, const std::vector<simpl::Scene> & scenes,
  const std::vector<simpl::Scene> & val, const std::string & out, const std::string & log_path)
{
  simpl::Model<T> model(cfg.model, cfg.seed);
  simpl::train::Trainer<T> trainer(model, cfg);
  std::string log = simpl::train::epoch_csv_header();
  trainer.fit(scenes, val.empty() ? nullptr : &val, [&](const simpl::train::EpochLog & e) {
    log += simpl::train::epoch_csv_row(e);
    std::fprintf(
      stderr, "epoch %zu lr %.2e loss %.5f pos %.5f yaw %.5f cls %.5f minFDE %.3f\n", e.epoch, e.lr, e.loss.total,
      e.loss.reg_pos, e.loss.reg_yaw, e.loss.cls, e.loss.min_fde);
  });
  model.save(out);
  simpl::write_text_file(log_path, log);
  return 0;
}

template <typename T>
simpl::PredictionSet run_predict(const std::string & ckpt, const simpl::Scene & scene)
{
  const auto model = simpl::Model<T>::load(ckpt);
  return simpl::predict(*model, scene);
}

template <typename T>
std::vector<simpl::study::BenchRow> run_bench(
  const std::string & ckpt, const std::vector<simpl::Scene> & scenes, std::size_t repeats, bool emulate)
{
  const auto model = simpl::Model<T>::load(ckpt);
  std::vector<simpl::study::BenchRow> rows;
  for (const auto & s : scenes) {
    simpl::validate_scene(s);
    rows.push_back(simpl::study::bench_single_pass(*model, s, repeats));
    if (emulate) {
      for (std::size_t t = 1; t <= s.agents.size(); ++t) {
        rows.push_back(simpl::study::bench_agent_centric(*model, s, t, repeats));
      }
    }
  }
  return rows;
}

void write_output(const std::string & path, const std::string & text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    simpl::write_text_file(path, text);
  }
}
}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"SIMPL motion forecasting toolkit"};
  app.require_subcommand(1);

  std::string config, out, data, val, log, ckpt, scene, pred, scenes, input;
  std::uint64_t seed = 0;
  std::size_t repeats = simpl::study::kMinRepeats;
  bool emulate = false;
  int degree = 5;

  auto * gen = app.add_subcommand("gen-data", "Generate a synthetic scene corpus");
  gen->add_option("--config", config, "generator config JSON")->required();
  gen->add_option("--out", out, "output directory")->required();

  auto * train = app.add_subcommand("train", "Train a model on a scene directory");
  train->add_option("--config", config, "training config JSON")->required();
  train->add_option("--data", data, "training scene directory")->required();
  train->add_option("--out", out, "checkpoint path")->required();
  auto * seed_opt = train->add_option("--seed", seed, "overrides the config seed");
  train->add_option("--val", val, "validation scene directory");
  train->add_option("--log", log, "per-epoch CSV log (default: <out>.csv)");

  auto * predict = app.add_subcommand("predict", "Predict all agents of a scene");
  predict->add_option("--ckpt", ckpt, "checkpoint")->required();
  predict->add_option("--scene", scene, "scene file")->required();
  predict->add_option("--out", out, "prediction file")->required();

  auto * eval = app.add_subcommand("eval", "Evaluate a prediction file against a scene");
  eval->add_option("--pred", pred, "prediction file")->required();
  eval->add_option("--scene", scene, "scene file with ground truth")->required();
  eval->add_option("--out", out, "metric CSV (default: stdout)");

  auto * bench = app.add_subcommand("bench", "Inference latency benchmark");
  bench->add_option("--ckpt", ckpt, "checkpoint")->required();
  bench->add_option("--scenes", scenes, "scene file or directory")->required();
  bench->add_option("--repeats", repeats, "timed repeats per measurement")->check(CLI::PositiveNumber);
  bench->add_flag("--emulate-agent-centric", emulate, "also time one pass per target agent");
  bench->add_option("--out", out, "latency CSV (default: stdout)");

  auto * fit = app.add_subcommand("fitcurve", "Fit ground-truth futures with Bernstein and monomial bases");
  fit->add_option("--input", input, "scene file or directory")->required();
  fit->add_option("--degree", degree, "polynomial degree")->check(CLI::PositiveNumber);
  fit->add_option("--out", out, "coefficient CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return static_cast<int>(SimplError_t::InvalidInput);
  }

  try {
    if (gen->parsed()) {
      const auto cfg = simpl::synth::GeneratorConfig::from_json(simpl::read_json_file(config));
      simpl::synth::write_corpus(out, cfg, simpl::synth::generate(cfg));
    } else if (train->parsed()) {
      const auto j = simpl::read_json_file(config);
      auto cfg = simpl::train::TrainConfig::from_json(j);
      if (seed_opt->count() > 0) {
        cfg.seed = seed;
      }
      const std::string precision = j.value("precision", std::string("f32"));
      const auto scenes_v = simpl::synth::read_corpus(data);
      const auto val_v = val.empty() ? std::vector<simpl::Scene>{} : simpl::synth::read_corpus(val);
      const std::string log_path = log.empty() ? out + ".csv" : log;
      if (precision == "f64") {
        return run_train<double>(cfg, scenes_v, val_v, out, log_path);
      }
      simpl::expect(precision == "f32", "precision must be \"f32\" or \"f64\"");
      return run_train<float>(cfg, scenes_v, val_v, out, log_path);
    } else if (predict->parsed()) {
      const auto s = simpl::read_scene(scene);
      const auto set = simpl::checkpoint_dtype(ckpt) == "f64" ? run_predict<double>(ckpt, s)
                                                              : run_predict<float>(ckpt, s);
      simpl::write_prediction(out, set);
    } else if (eval->parsed()) {
      const auto s = simpl::read_scene(scene);
      const auto set = simpl::read_prediction(pred);
      simpl::expect(
        set.scenario_id == s.scenario_id,
        "prediction is for scene '" + set.scenario_id + "', not '" + s.scenario_id + "'");
      const auto rows = simpl::metrics::evaluate_scene(set, s);
      const std::size_t k = set.agents.empty() ? 0 : set.agents.front().modes.size();
      write_output(out, simpl::metrics::to_csv(rows, simpl::metrics::aggregate(rows, k)));
    } else if (bench->parsed()) {
      const auto s = load_scenes(scenes);
      const auto rows = simpl::checkpoint_dtype(ckpt) == "f64" ? run_bench<double>(ckpt, s, repeats, emulate)
                                                               : run_bench<float>(ckpt, s, repeats, emulate);
      write_output(out, simpl::study::bench_csv(rows));
    } else if (fit->parsed()) {
      const auto rows = simpl::study::coefficient_study(load_scenes(input), degree);
      write_output(out, simpl::study::coefficient_csv(rows));
    }
  } catch (const SimplException & e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const fs::filesystem_error & e) {
    std::cerr << "error (io): " << e.what() << '\n';
    return static_cast<int>(SimplError_t::IoError);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(SimplError_t::NumericFailure);
  }
  return 0;
}
