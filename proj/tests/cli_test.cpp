/* Copyright 2026 The refprior Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "refprior/fusion.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(REFPRIOR_WORK_DIR) / "cli_test";

int Run(const std::string& args) {
  const std::string cmd = std::string(REFPRIOR_CLI_PATH) + " " + args;
  return std::system(cmd.c_str());
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string P(const std::string& name) { return (kWork / name).string(); }

void Generate() {
  static bool done = false;
  if (done) return;
  fs::remove_all(kWork);
  fs::create_directories(kWork);
  REQUIRE(Run("gen --n 200 --seed 4 --out " + P("data")) == 0);
  done = true;
}

}  // namespace

TEST_CASE("cli pipeline reports accuracy") {
  Generate();
  const std::string data = "--samples " + P("data/samples.jsonl") + " --relmaps " +
                           P("data/relmaps.jsonl");
  REQUIRE(Run("train-fusion " + data + " --epochs 200 --seed 3 --out " + P("net.json") +
              " --log " + P("loss.csv") + " > " + P("train.json")) == 0);
  const auto train = nlohmann::json::parse(Slurp(P("train.json")));
  CHECK(train["total"].get<double>() >= 0.0);
  CHECK(Slurp(P("loss.csv")).rfind("epoch,objective\n", 0) == 0);

  REQUIRE(Run("score " + data + " --mode learned --net " + P("net.json") + " --out " +
              P("preds.json") + " --log " + P("score.log")) == 0);
  REQUIRE(Run("eval --samples " + P("data/samples.jsonl") + " --preds " + P("preds.json") +
              " --out " + P("report.json") + " > /dev/null") == 0);
  const auto report = nlohmann::json::parse(Slurp(P("report.json")));
  const double acc = report["top1_accuracy"].get<double>();
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
  CHECK(report["overall"]["total"].get<int>() == 200);
}

TEST_CASE("a zero net ties every candidate") {
  Generate();
  {
    std::ofstream out(P("zero.json"));
    out << refprior::FusionNet::Zero().ToJson();
  }
  const std::string data = "--samples " + P("data/samples.jsonl") + " --relmaps " +
                           P("data/relmaps.jsonl");
  REQUIRE(Run("score " + data + " --mode learned --net " + P("zero.json") + " --out " +
              P("zero_preds.json")) == 0);
  REQUIRE(Run("score " + data + " --mode zeroshot --out " + P("zs_preds.json")) == 0);
  const auto zero = nlohmann::json::parse(Slurp(P("zero_preds.json")));
  const auto zs = nlohmann::json::parse(Slurp(P("zs_preds.json")));
  int nonzero = 0;
  for (const auto& p : zero["predictions"]) CHECK(p["index"].get<int>() == 0);
  for (const auto& p : zs["predictions"]) nonzero += p["index"].get<int>() != 0;
  CHECK(nonzero > 0);
}

TEST_CASE("reruns are byte identical") {
  Generate();
  REQUIRE(Run("gen --n 200 --seed 4 --out " + P("again")) == 0);
  CHECK(Slurp(P("again/samples.jsonl")) == Slurp(P("data/samples.jsonl")));
  CHECK(Slurp(P("again/relmaps.jsonl")) == Slurp(P("data/relmaps.jsonl")));
  REQUIRE(Run("split --mode fewshot --spec " + P("few.json") + " --samples " +
              P("data/samples.jsonl") + " --out " + P("m1.json") + " 2> " + P("err.json")) != 0);
  {
    std::ofstream out(P("few.json"));
    out << R"({"mode":"fewshot","support_categories":["person"],"support_sizes":[5],"novel_sizes":[5,10]})";
  }
  for (const char* name : {"m1.json", "m2.json"}) {
    REQUIRE(Run("split --mode fewshot --spec " + P("few.json") + " --samples " +
                P("data/samples.jsonl") + " --seed 2 --out " + P(name)) == 0);
  }
  CHECK(Slurp(P("m1.json")) == Slurp(P("m2.json")));
}

TEST_CASE("failures are reported as json on stderr") {
  Generate();
  CHECK(Run("score --samples " + P("missing.jsonl") + " --out " + P("x.json") + " 2> " +
            P("err.json")) != 0);
  const auto err = nlohmann::json::parse(Slurp(P("err.json")));
  CHECK(err["error"]["kind"] == "IoError");
  CHECK_FALSE(fs::exists(P("x.json")));

  CHECK(Run("score --samples " + P("data/samples.jsonl") + " --mode learned --out " +
            P("x.json") + " 2> " + P("err2.json")) != 0);
  CHECK(nlohmann::json::parse(Slurp(P("err2.json")))["error"]["kind"] == "Usage");

  CHECK(Run("split --mode lowdata --samples " + P("data/samples.jsonl") + " --spec " +
            P("few.json") + " --out " + P("x.json") + " 2> " + P("err3.json")) != 0);
  CHECK(Run("frobnicate 2> " + P("err4.json")) != 0);
  CHECK(nlohmann::json::parse(Slurp(P("err4.json")))["error"]["kind"] == "Usage");
}

TEST_CASE("export-field writes a raster") {
  Generate();
  REQUIRE(Run("export-field --terms \"bottom left\" --res 8 --out " + P("grid.json")) == 0);
  const auto g = nlohmann::json::parse(Slurp(P("grid.json")));
  CHECK(g["values"].size() == 64);
  CHECK(g["terms"][0] == "bottom left");
  // rows run top to bottom, so the bottom-left cell is the strongest
  const auto& v = g["values"];
  CHECK(v[56].get<double>() > v[7].get<double>());
}
