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
#include "refprior/derod.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "refprior/error.hpp"

using namespace refprior;

namespace {

std::vector<std::string> Ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
  return ids;
}

bool IsPrefix(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

std::vector<LabeledId> Toy(std::size_t n, std::size_t support_every) {
  std::vector<LabeledId> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"s" + std::to_string(i), i % support_every == 0 ? "person" : "cup"});
  }
  return out;
}

}  // namespace

TEST_CASE("split counts") {
  CHECK(SplitCount(0.005, 10000) == 50);
  CHECK(SplitCount(0.001, 100) == 1);
  CHECK(SplitCount(1.0, 7) == 7);
  CHECK(SplitCount(0.05, 10) == 1);
  CHECK(SplitCount(0.25, 10) == 3);  // 2.5 rounds away from zero
  CHECK(PercentName(0.001) == "0.1%");
  CHECK(PercentName(0.05) == "5%");
}

TEST_CASE("low-data splits nest") {
  const auto ids = Ids(10000);
  const auto m = SampleLowData(ids, {}, 7);
  REQUIRE(m.splits.size() == 6);
  CHECK(m.mode == "lowdata");
  CHECK(m.splits[2].first == "0.5%");
  CHECK(m.splits[2].second.size() == 50);
  for (std::size_t i = 1; i < m.splits.size(); ++i) {
    CHECK(IsPrefix(m.splits[i - 1].second, m.splits[i].second));
  }
  CHECK(SampleLowData(ids, {}, 7).ToJson() == m.ToJson());
  CHECK(SampleLowData(ids, {}, 8).ToJson() != m.ToJson());
}

TEST_CASE("low-data errors and spec validation") {
  std::vector<std::string> none;
  CHECK_THROWS_AS(SampleLowData(none, {}, 1), Error);
  const std::vector<std::string> dup{"a", "b", "a"};
  CHECK_THROWS_AS(SampleLowData(dup, {}, 1), Error);
  CHECK_THROWS_AS(SampleLowData(Ids(5), LowDataSpec{{0.2, 0.1}}, 1), Error);
  CHECK_THROWS_AS(SampleLowData(Ids(5), LowDataSpec{{0.0, 0.1}}, 1), Error);
  CHECK_THROWS_AS(SampleLowData(Ids(5), LowDataSpec{{0.5, 1.5}}, 1), Error);
}

TEST_CASE("few-shot splits") {
  const auto toy = Toy(10, 2);  // 5 person, 5 cup
  FewShotSpec spec;
  spec.support_sizes = {2};
  spec.novel_sizes = {1, 2};
  const auto m = SampleFewShot(toy, spec, 3);
  REQUIRE(m.splits.size() == 3);
  const auto& support = *m.Find("support_2");
  const auto& n1 = *m.Find("novel_1");
  const auto& n2 = *m.Find("novel_2");
  CHECK(support.size() == 2);
  CHECK(IsPrefix(n1, n2));
  for (const auto& id : support) {
    CHECK(std::stoi(id.substr(1)) % 2 == 0);
    CHECK(std::find(n2.begin(), n2.end(), id) == n2.end());
  }
  for (const auto& id : n2) CHECK(std::stoi(id.substr(1)) % 2 == 1);
  CHECK(SampleFewShot(toy, spec, 3).ToJson() == m.ToJson());

  const auto tiny = Toy(10, 10);  // one person
  try {
    SampleFewShot(tiny, spec, 3);
    FAIL("expected InsufficientPool");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kInsufficientPool);
  }
  FewShotSpec unordered = spec;
  unordered.novel_sizes = {2, 1};
  CHECK_THROWS_AS(SampleFewShot(toy, unordered, 3), Error);
}

TEST_CASE("spec and manifest json") {
  const SplitSpec low = LowDataSpec{{0.1, 0.5}};
  CHECK(std::get<LowDataSpec>(SpecFromJson(SpecToJson(low))).percentages ==
        std::vector<double>{0.1, 0.5});
  const auto few = SpecFromJson(
      R"({"mode":"fewshot","support_categories":["person"],"support_size":2,"novel_sizes":[1,2]})");
  CHECK(std::get<FewShotSpec>(few).support_sizes == std::vector<std::size_t>{2});
  CHECK_THROWS_AS(SpecFromJson(R"({"mode":"other"})"), Error);

  const auto m = SampleLowData(Ids(40), {{0.1, 0.5}}, 5);
  const auto back = SplitManifest::FromJson(m.ToJson());
  CHECK(back.ToJson() == m.ToJson());
  CHECK(back.spec_hash.size() == 16);
}

TEST_CASE("inclusion frequency is binomial") {
  const auto ids = Ids(20);
  const double p = 0.25;
  const int seeds = 1000;
  std::vector<int> hits(ids.size(), 0);
  for (int seed = 0; seed < seeds; ++seed) {
    const auto m = SampleLowData(ids, LowDataSpec{{p}}, static_cast<std::uint64_t>(seed));
    for (const auto& id : m.splits[0].second) ++hits[std::stoi(id.substr(1))];
  }
  const double sigma = std::sqrt(p * (1 - p) / seeds);
  for (int h : hits) CHECK(std::abs(h / static_cast<double>(seeds) - p) <= 3 * sigma);
}
