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

#include "simpl/io/prediction_io.hpp"
#include "simpl/metrics/metrics.hpp"
#include "simpl/model/prediction.hpp"
#include "simpl/model/simpl_net.hpp"
#include "simpl/scene/scene_io.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace simpl;
namespace fs = std::filesystem;

namespace
{
int run(const std::string & args)
{
  const std::string cmd = std::string(SIMPL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path & p, const std::string & text)
{
  std::ofstream(p) << text;
}

std::size_t lines(const std::string & text)
{
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

class Cli : public ::testing::Test
{
protected:
  static void SetUpTestSuite()
  {
    dir_ = fs::temp_directory_path() / "simpl_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write(dir_ / "gen.json", R"({"seed": 4, "num_scenes": 3})");
    write(
      dir_ / "train.json",
      R"({"embed_dim": 16, "sft_layers": 1, "heads": 2, "modes": 2, "epochs": 1, "batch_size": 2, "seed": 1})");
    ASSERT_EQ(run("gen-data --config " + p("gen.json") + " --out " + p("data")), 0);
    ASSERT_EQ(run("train --config " + p("train.json") + " --data " + p("data") + " --out " + p("m.ckpt")), 0);
  }

  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string p(const std::string & name) { return (dir_ / name).string(); }

  static inline fs::path dir_;
};
}  // namespace

TEST_F(Cli, GenDataWritesManifestAndScenes)
{
  EXPECT_TRUE(fs::exists(dir_ / "data" / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir_ / "data" / "synth_000002.json"));
  EXPECT_TRUE(fs::exists(dir_ / "m.ckpt"));
  const auto log = simpl::testing::read_bytes(p("m.ckpt.csv"));
  EXPECT_EQ(lines(log), 2u);
}

TEST_F(Cli, PredictIsReproducibleAndMatchesLibrary)
{
  const std::string scene = p("data/synth_000001.json");
  ASSERT_EQ(run("predict --ckpt " + p("m.ckpt") + " --scene " + scene + " --out " + p("a.json")), 0);
  ASSERT_EQ(run("predict --ckpt " + p("m.ckpt") + " --scene " + scene + " --out " + p("b.json")), 0);
  EXPECT_EQ(simpl::testing::read_bytes(p("a.json")), simpl::testing::read_bytes(p("b.json")));

  ASSERT_EQ(checkpoint_dtype(p("m.ckpt")), "f32");
  const auto model = Model<float>::load(p("m.ckpt"));
  const auto s = read_scene(scene);
  const auto lib = predict(*model, s);
  const auto file = read_prediction(p("a.json"));
  ASSERT_EQ(file.agents.size(), lib.agents.size());
  for (std::size_t a = 0; a < lib.agents.size(); ++a) {
    for (std::size_t k = 0; k < lib.agents[a].modes.size(); ++k) {
      EXPECT_EQ(file.agents[a].modes[k].positions, lib.agents[a].modes[k].positions);
      EXPECT_EQ(file.agents[a].modes[k].score, lib.agents[a].modes[k].score);
    }
  }

  ASSERT_EQ(run("eval --pred " + p("a.json") + " --scene " + scene + " --out " + p("m.csv")), 0);
  const auto rows = metrics::evaluate_scene(lib, s);
  EXPECT_EQ(simpl::testing::read_bytes(p("m.csv")), metrics::to_csv(rows, metrics::aggregate(rows, 2)));
}

TEST_F(Cli, BenchAndFitcurve)
{
  const std::string scene = p("data/synth_000000.json");
  ASSERT_EQ(run("bench --ckpt " + p("m.ckpt") + " --scenes " + scene + " --repeats 1 --out " + p("bench.csv")), 0);
  EXPECT_EQ(lines(simpl::testing::read_bytes(p("bench.csv"))), 2u);
  ASSERT_EQ(
    run("bench --ckpt " + p("m.ckpt") + " --scenes " + scene + " --repeats 1 --emulate-agent-centric --out " +
        p("bench2.csv")),
    0);
  const auto targets = read_scene(scene).agents.size();
  EXPECT_EQ(lines(simpl::testing::read_bytes(p("bench2.csv"))), 2u + targets);

  ASSERT_EQ(run("fitcurve --input " + p("data") + " --degree 5 --out " + p("c1.csv")), 0);
  ASSERT_EQ(run("fitcurve --input " + p("data") + " --degree 5 --out " + p("c2.csv")), 0);
  const auto c1 = simpl::testing::read_bytes(p("c1.csv"));
  EXPECT_EQ(c1, simpl::testing::read_bytes(p("c2.csv")));
  EXPECT_EQ(c1.rfind("basis,order,value\n", 0), 0u);
}

TEST_F(Cli, ExitCodes)
{
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("predict --ckpt " + p("m.ckpt")), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("predict --ckpt " + p("missing.ckpt") + " --scene " + p("data/synth_000000.json") + " --out " + p("x.json")), 4);
  EXPECT_EQ(run("eval --pred " + p("missing.json") + " --scene " + p("data/synth_000000.json")), 4);
  write(dir_ / "bad_gen.json", R"({"speed": "fast"})");
  EXPECT_EQ(run("gen-data --config " + p("bad_gen.json") + " --out " + p("bad")), 2);
  write(dir_ / "bad_train.json", R"({"embed_dim": 16, "heads": 3})");
  EXPECT_EQ(run("train --config " + p("bad_train.json") + " --data " + p("data") + " --out " + p("bad.ckpt")), 2);
  write(dir_ / "garbage.ckpt", "not a checkpoint");
  EXPECT_EQ(run("predict --ckpt " + p("garbage.ckpt") + " --scene " + p("data/synth_000000.json") + " --out " + p("x.json")), 4);
}
