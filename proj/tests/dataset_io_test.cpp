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
#include "refprior/dataset_io.hpp"

#include <filesystem>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "refprior/error.hpp"
#include "refprior/synthbench.hpp"

using namespace refprior;

namespace {

const char* kThreeSamples =
    R"({"id":"a","w":100,"h":50,"phrase":"cup on the left","gt":[10,5,20,10],"category":"cup","candidates":[{"box":[10,5,20,10],"score":0.9},{"box":[60,20,30,20],"score":0.4}]})"
    "\n"
    R"({"id":"b","w":100,"h":50,"phrase":"the dog","gt":[0,0,50,50],"category":"dog","candidates":[{"box":[0,0,50,50],"score":0.7}]})"
    "\n\n"
    R"({"id":"c","w":100,"h":50,"phrase":"top chair","gt":[50,0,50,25],"category":"chair","candidates":[{"box":[50,0,50,25],"score":0.2}]})"
    "\n";

ErrorKind KindOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::kUsage;
}

}  // namespace

TEST_CASE("parse pixel samples") {
  std::istringstream in(kThreeSamples);
  const auto samples = ParseSamples(in);
  REQUIRE(samples.size() == 3);
  CHECK(samples[0].gt == Box{0.1, 0.1, 0.3, 0.3});
  CHECK(samples[0].candidates[1].box == Box{0.6, 0.4, 0.9, 0.8});
  CHECK(samples[2].category == "chair");
}

TEST_CASE("parse normalized samples with header") {
  std::istringstream in(
      R"({"header":{"box_format":"xyxy_norm"}})"
      "\n"
      R"({"id":"a","w":10,"h":10,"phrase":"x","gt":[0.1,0.1,0.3,0.3],"candidates":[{"box":[0,0,1,1],"score":1}]})");
  const auto samples = ParseSamples(in);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].gt == Box{0.1, 0.1, 0.3, 0.3});
}

TEST_CASE("sample validation errors") {
  const auto parse = [](const std::string& text) {
    return [text] {
      std::istringstream in(text);
      ParseSamples(in);
    };
  };
  CHECK(KindOf(parse("{not json")) == ErrorKind::kParseError);
  CHECK(KindOf(parse(R"({"id":"a"})")) == ErrorKind::kParseError);
  const std::string row =
      R"({"id":"a","w":10,"h":10,"phrase":"x","gt":[0,0,5,5],"candidates":[{"box":[0,0,5,5],"score":0.5}]})";
  CHECK(KindOf(parse(row + "\n" + row)) == ErrorKind::kDuplicateId);
  CHECK(KindOf(parse(R"({"id":"a","w":10,"h":10,"phrase":"x","gt":[0,0,0,5],"candidates":[{"box":[0,0,5,5],"score":0.5}]})")) ==
        ErrorKind::kInvalidSample);
  CHECK(KindOf(parse(R"({"id":"a","w":10,"h":10,"phrase":"x","gt":[0,0,5,5],"candidates":[{"box":[0,0,5,5],"score":1.5}]})")) ==
        ErrorKind::kInvalidSample);
  CHECK(KindOf(parse(R"({"id":"a","w":10,"h":10,"phrase":"x","gt":[8,0,5,5],"candidates":[{"box":[0,0,5,5],"score":0.5}]})")) ==
        ErrorKind::kInvalidBox);
  // zero-area candidates are fine
  std::istringstream ok(R"({"id":"a","w":10,"h":10,"phrase":"x","gt":[0,0,5,5],"candidates":[{"box":[3,3,0,0],"score":0.5}]})");
  CHECK(ParseSamples(ok).size() == 1);
}

TEST_CASE("relmaps and join") {
  std::istringstream maps_in(
      R"({"id":"a","w":2,"h":1,"values":[0.2,1.4]})"
      "\n"
      R"({"id":"b","w":1,"h":1,"values":[0.5]})"
      "\n"
      R"({"id":"zz","w":1,"h":1,"values":[0.5]})");
  auto maps = ParseRelmaps(maps_in);
  std::istringstream samples_in(kThreeSamples);
  const auto ds = Join(ParseSamples(samples_in), std::move(maps));
  CHECK(ds.samples.size() == 3);
  CHECK(ds.missing_relmaps == 1);
  CHECK(ds.orphan_relmaps == 1);
  CHECK(ds.clamped_values == 1);
  CHECK(ds.grid(0) != nullptr);
  CHECK(ds.grid(2) == nullptr);

  std::istringstream bad(R"({"id":"q","w":2,"h":2,"values":[0.1,0.2,0.3]})");
  try {
    ParseRelmaps(bad);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDimensionMismatch);
    CHECK(std::string(e.what()).find("'q'") != std::string::npos);
  }
}

TEST_CASE("generated corpus survives a file round trip") {
  SceneSpec spec;
  spec.seed = 3;
  const auto scenes = Generate(spec, 50);
  std::vector<Sample> samples;
  std::vector<std::string> ids;
  std::vector<const RelevanceGrid*> grids;
  for (const auto& s : scenes) {
    samples.push_back(s.sample);
    ids.push_back(s.sample.id);
    grids.push_back(&s.grid);
  }
  const auto dir = std::filesystem::temp_directory_path() / "refprior_io_test";
  std::filesystem::create_directories(dir);
  const std::string sp = (dir / "samples.jsonl").string();
  const std::string rp = (dir / "relmaps.jsonl").string();
  const std::vector<std::pair<std::string, std::string>> files{
      {sp, SamplesToJsonl(samples)}, {rp, RelmapsToJsonl(ids, grids)}};
  WriteFilesAtomic(files);
  CHECK_FALSE(std::filesystem::exists(sp + ".tmp"));

  const auto ds = Ingest(sp, rp);
  REQUIRE(ds.samples.size() == samples.size());
  CHECK(ds.missing_relmaps == 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    CHECK(ds.samples[i].gt == samples[i].gt);
    CHECK(ds.samples[i].phrase == samples[i].phrase);
    CHECK(ds.samples[i].ambiguous == samples[i].ambiguous);
    REQUIRE(ds.samples[i].candidates.size() == samples[i].candidates.size());
    for (std::size_t j = 0; j < samples[i].candidates.size(); ++j) {
      CHECK(ds.samples[i].candidates[j].box == samples[i].candidates[j].box);
      CHECK(ds.samples[i].candidates[j].score == samples[i].candidates[j].score);
    }
    const auto v = ds.grid(i)->values();
    CHECK(std::equal(v.begin(), v.end(), scenes[i].grid.values().begin()));
  }
  CHECK(SamplesToJsonl(ds.samples) == files[0].second);
  std::filesystem::remove_all(dir);
}

TEST_CASE("predictions json") {
  const std::vector<Prediction> preds{{"a", 2, 0.75}, {"b", 0, 0.5}};
  const auto back = PredictionsFromJson(PredictionsToJson("zeroshot", preds));
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "a");
  CHECK(back[0].index == 2);
  CHECK(back[1].score == 0.5);
  CHECK_THROWS_AS(PredictionsFromJson("{}"), Error);
}

TEST_CASE("atomic write failure leaves nothing behind") {
  const std::vector<std::pair<std::string, std::string>> files{
      {"/nonexistent-dir/x.json", "{}"}};
  CHECK_THROWS_AS(WriteFilesAtomic(files), Error);
}
